#include "dforge/error.hpp"
#include "dforge/serialize.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace dforge;

TEST_CASE("booster JSON round trip") {
    const RootedBooster rb = layer_boosters(3);
    const Json j = booster_json(rb);
    CHECK(j.at("q") == 3);
    const RootedBooster back = booster_from_json(Json::parse(j.dump()));
    CHECK(back.graph == rb.graph);
    CHECK(back.on_decomp == rb.on_decomp);
    CHECK(back.off_decomp == rb.off_decomp);
    CHECK(back.root == rb.root);
    CHECK(verify_rooted_booster(back).ok());
}

TEST_CASE("absorber JSON round trip") {
    const OmniAbsorber oa = brute_force_absorber(Graph(9, {{0, 1}, {0, 2}, {1, 2}}), 3, 9);
    const Json j = absorber_json(oa);
    for (const char* key : {"q", "n", "X_edges", "A_edges", "family", "qmap"}) CHECK(j.contains(key));
    CHECK(j.at("qmap").size() == 2);
    const OmniAbsorber back = absorber_from_json(Json::parse(j.dump()));
    CHECK(back.X == oa.X);
    CHECK(back.A == oa.A);
    CHECK(back.family == oa.family);
    CHECK(back.qmap == oa.qmap);
    CHECK(verify_omni_absorber(back).ok());
    CHECK(absorber_report_json(verify_omni_absorber(back)).at("ok") == true);
}

TEST_CASE("packing JSON validation") {
    CHECK(packing_from_json(Json::parse("[[2,1,0],[3,4,5]]")) == Packing{{0, 1, 2}, {3, 4, 5}});
    CHECK_THROWS_AS(clique_from_json(Json::parse("[1,1,2]")), InvalidParameter);
    CHECK_THROWS(packing_from_json(Json::parse("{\"a\":1}")));
}

TEST_CASE("pipeline config JSON") {
    PipelineConfig c = desk_profile();
    c.seed = 77;
    c.nibble.thresholds.codegree = 3.0;
    const PipelineConfig back = config_from_json(Json::parse(config_json(c).dump()));
    CHECK(back.n == c.n);
    CHECK(back.seed == 77);
    CHECK(back.reservoir_p == c.reservoir_p);
    CHECK(back.nibble_retries == c.nibble_retries);
    CHECK(back.stage_retries == c.stage_retries);
    CHECK(back.nibble.rate_floor == c.nibble.rate_floor);
    CHECK(back.nibble.thresholds.codegree == 3.0);
    CHECK(back.booster == c.booster);

    const PipelineConfig partial = config_from_json(Json::parse(R"({"n": 13, "nibble": {"bite": 0.3}})"), c);
    CHECK(partial.n == 13);
    CHECK(partial.nibble.bite == 0.3);
    CHECK(partial.seed == 77);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"nn": 13})")), InvalidParameter);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"booster": "huge"})")), InvalidParameter);
}

TEST_CASE("result JSON shapes") {
    PipelineConfig c = desk_profile();
    c.seed = 0;
    const Json pr = pipeline_result_json(end_to_end_pipeline(c));
    CHECK(pr.contains("ok"));
    CHECK(pr.contains("constants"));

    NibbleResult nr;
    nr.a_perfect = true;
    const Json nj = nibble_json(nr);
    for (const char* key : {"status", "covered_A", "rounds", "leave_fraction", "reserve_used"}) CHECK(nj.contains(key));

    EmbeddingSpreadReport er;
    const Json ej = embedding_json(er);
    for (const char* key : {"resamples", "max_degree", "disjoint", "spread_estimate", "bound"}) CHECK(ej.contains(key));
}

TEST_CASE("JSON files") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), NotFound);
    const auto path = std::filesystem::temp_directory_path() / "dforge_serialize_test.json";
    write_json_file(path.string(), Json{{"a", 1}});
    CHECK(read_json_file(path.string()).at("a") == 1);
    {
        std::FILE* f = std::fopen(path.string().c_str(), "w");
        std::fputs("{not json", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_json_file(path.string()), InvalidParameter);
    std::filesystem::remove(path);
}
