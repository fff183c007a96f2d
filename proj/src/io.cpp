#include "dforge/io.hpp"

#include "dforge/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dforge {
namespace {

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path);
    return in;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw InvalidParameter("edge list: missing header");
    std::istringstream header(line);
    long n = 0, m = 0;
    if (!(header >> n >> m) || n < 0 || m < 0) throw InvalidParameter("edge list: bad header '" + line + "'");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        if (!next_content_line(in, line)) throw InvalidParameter("edge list: expected " + std::to_string(m) + " edges");
        std::istringstream row(line);
        int u = 0, v = 0;
        if (!(row >> u >> v)) throw InvalidParameter("edge list: bad edge line '" + line + "'");
        if (u >= v) throw InvalidParameter("edge list: edge line must have u < v: '" + line + "'");
        edges.emplace_back(u, v);
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Packing read_packing(std::istream& in) {
    Packing p;
    std::string line;
    while (next_content_line(in, line)) {
        std::istringstream row(line);
        std::vector<Vertex> vs;
        int v = 0;
        while (row >> v) vs.push_back(v);
        if (!row.eof()) throw InvalidParameter("packing: bad line '" + line + "'");
        if (!std::is_sorted(vs.begin(), vs.end())) throw InvalidParameter("packing: unsorted clique '" + line + "'");
        p.emplace_back(std::move(vs));
    }
    return canonical(std::move(p));
}

void write_packing(std::ostream& out, const Packing& p, const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    for (const Clique& c : p) {
        for (std::size_t i = 0; i < c.vertices().size(); ++i) out << (i ? " " : "") << c.vertices()[i];
        out << '\n';
    }
}

Hypergraph read_hypergraph(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw InvalidParameter("hypergraph: missing header");
    std::istringstream header(line);
    long n = 0, m = 0;
    if (!(header >> n >> m) || n < 0 || m < 0) throw InvalidParameter("hypergraph: bad header '" + line + "'");
    Hypergraph h;
    h.num_vertices = static_cast<int>(n);
    for (long i = 0; i < m; ++i) {
        if (!next_content_line(in, line)) throw InvalidParameter("hypergraph: expected " + std::to_string(m) + " edges");
        std::istringstream row(line);
        std::vector<int> e;
        int v = 0;
        while (row >> v) {
            if (v < 0 || v >= n) throw InvalidParameter("hypergraph: vertex out of range in '" + line + "'");
            e.push_back(v);
        }
        std::sort(e.begin(), e.end());
        if (e.empty() || std::adjacent_find(e.begin(), e.end()) != e.end())
            throw InvalidParameter("hypergraph: bad hyperedge '" + line + "'");
        h.edges.push_back(std::move(e));
    }
    return h;
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
    out << h.num_vertices << ' ' << h.edges.size() << '\n';
    for (const auto& e : h.edges) {
        for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
        out << '\n';
    }
}

Graph load_edge_list(const std::string& path) {
    auto in = open_or_throw(path);
    return read_edge_list(in);
}

Packing load_packing(const std::string& path) {
    auto in = open_or_throw(path);
    return read_packing(in);
}

Hypergraph load_hypergraph(const std::string& path) {
    auto in = open_or_throw(path);
    return read_hypergraph(in);
}

}  // namespace dforge
