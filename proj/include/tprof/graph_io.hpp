#pragma once

#include "tprof/movement_graph.hpp"

#include <iosfwd>

namespace tprof {

/// DOT digraph. Nodes carry name, support and mainstream attributes; arcs
/// carry weight printed with round-trip precision.
void write_dot(std::ostream& out, const MovementGraph& graph);

/// Reads the DOT subset produced by write_dot: node and edge statements
/// with attribute lists, quoted or bare ids, comments. Unknown attributes
/// are ignored. Throws DataError on syntax errors.
MovementGraph read_dot(std::istream& in);

void write_graphml(std::ostream& out, const MovementGraph& graph);

/// src,dst,weight
void write_edge_csv(std::ostream& out, const MovementGraph& graph);

} // namespace tprof
