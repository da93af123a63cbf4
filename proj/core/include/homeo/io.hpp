#pragma once

#include <optional>
#include <string>

#include "homeo/hypergraph.hpp"

namespace homeo {

/// A hypergraph as read from or written to disk, with optional classes.
struct GraphDoc {
  Hypergraph graph;
  std::optional<std::vector<std::vector<Vertex>>> classes;

  GraphDoc() : graph(1) {}
  explicit GraphDoc(Hypergraph g) : graph(std::move(g)) {}
  explicit GraphDoc(const PartitionedHypergraph& g)
      : graph(g.base()), classes(g.classes()) {}

  bool partitioned() const { return classes.has_value(); }
  PartitionedHypergraph as_partitioned() const;
};

// Text format: header "r n m", then m edge lines of r vertex ids each;
// a partitioned graph appends a line "classes" and one line per class, an
// unpartitioned graph with isolated vertices appends "isolated" and their
// ids.
// Output is canonical: ids sorted within edges, edges lexicographic,
// classes listed in order. Writers and parsers round-trip bit-exactly.
std::string to_text(const GraphDoc& doc);
GraphDoc parse_text(const std::string& content);

// JSON mirror: {"uniformity": r, "vertices": [...], "edges": [[...]],
// "classes": [[...]]?} with the same sorting conventions.
std::string to_json_string(const GraphDoc& doc);
GraphDoc parse_json(const std::string& content);

/// Detects JSON by a leading '{'.
GraphDoc parse_graph(const std::string& content);

GraphDoc load_graph(const std::string& path);
void save_graph(const GraphDoc& doc, const std::string& path);  // .json => JSON

}  // namespace homeo
