#pragma once

#include "dforge/graph.hpp"

#include <iosfwd>
#include <string>

namespace dforge {

// Edge list: header "n m", then m lines "u v" with u < v.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

// Packing: one clique per line as sorted vertex ids; '#' starts a comment line.
Packing read_packing(std::istream& in);
void write_packing(std::ostream& out, const Packing& p, const std::string& comment = {});

// Hypergraph: header "N M", then one hyperedge per line as vertex ids.
Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);

Graph load_edge_list(const std::string& path);
Packing load_packing(const std::string& path);
Hypergraph load_hypergraph(const std::string& path);

}  // namespace dforge
