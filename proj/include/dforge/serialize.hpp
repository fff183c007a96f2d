#pragma once

#include "dforge/absorber.hpp"
#include "dforge/booster.hpp"
#include "dforge/embed.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/experiment.hpp"
#include "dforge/nibble.hpp"
#include "dforge/pipeline.hpp"
#include "dforge/spread.hpp"

#include <json.hpp>

#include <string>

namespace dforge {

using Json = nlohmann::json;

Json clique_json(const Clique& c);
Json packing_json(const Packing& p);
Json edges_json(const std::vector<Edge>& edges);
Clique clique_from_json(const Json& j);
Packing packing_from_json(const Json& j);
std::vector<Edge> edges_from_json(const Json& j);

// {"q","vertices","edges","on_decomp","off_decomp","root"}
Json booster_json(const RootedBooster& rb);
RootedBooster booster_from_json(const Json& j);

// {"q","n","X_edges","A_edges","family","qmap":[{"L","cliques"}], "roots"}
Json absorber_json(const OmniAbsorber& oa);
OmniAbsorber absorber_from_json(const Json& j);

Json booster_report_json(const BoosterReport& r);
Json absorber_report_json(const AbsorberReport& r);
Json spread_report_json(const SpreadReport& r);
Json nibble_json(const NibbleResult& r);
Json embedding_json(const EmbeddingSpreadReport& r);

// Every PipelineConfig field; missing keys keep their defaults, unknown keys
// are rejected so that typos do not pass silently.
Json config_json(const PipelineConfig& c);
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});
Json pipeline_result_json(const PipelineResult& r);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace dforge
