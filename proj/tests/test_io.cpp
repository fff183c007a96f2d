#include "dforge/error.hpp"
#include "dforge/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace dforge;

TEST_CASE("edge list round trip") {
    const Graph k5 = Graph::complete(5).minus(Graph(5, {{0, 1}, {2, 3}}));
    std::stringstream ss;
    write_edge_list(ss, k5);
    CHECK(ss.str().rfind("5 8\n", 0) == 0);
    CHECK(read_edge_list(ss) == k5);
}

TEST_CASE("edge list rejects malformed input") {
    std::istringstream reversed("3 1\n2 1\n");
    CHECK_THROWS_AS(read_edge_list(reversed), InvalidParameter);
    std::istringstream short_list("3 2\n0 1\n");
    CHECK_THROWS_AS(read_edge_list(short_list), InvalidParameter);
    std::istringstream dup("3 2\n0 1\n0 1\n");
    CHECK_THROWS_AS(read_edge_list(dup), InvalidParameter);
}

TEST_CASE("packing text format") {
    std::istringstream in("# a comment\n0 1 2\n\n3 4 5\n");
    const Packing p = read_packing(in);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == Clique{0, 1, 2});
    std::ostringstream out;
    write_packing(out, p, "two triangles");
    CHECK(out.str() == "# two triangles\n0 1 2\n3 4 5\n");
    std::istringstream unsorted("2 1 0\n");
    CHECK_THROWS_AS(read_packing(unsorted), InvalidParameter);
}

TEST_CASE("hypergraph text format") {
    Hypergraph h{6, {{0, 1, 2}, {2, 3}, {4}}};
    std::stringstream ss;
    write_hypergraph(ss, h);
    const Hypergraph back = read_hypergraph(ss);
    CHECK(back.num_vertices == 6);
    CHECK(back.edges == h.edges);
    std::istringstream bad("3 1\n0 5\n");
    CHECK_THROWS_AS(read_hypergraph(bad), InvalidParameter);
}

TEST_CASE("missing files") {
    CHECK_THROWS_AS(load_edge_list("/nonexistent/graph.txt"), NotFound);
}
