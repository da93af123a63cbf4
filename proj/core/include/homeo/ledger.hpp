#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "homeo/hypergraph.hpp"

namespace homeo {

/// The marked ("bad") copies at one level of the descent, ℬ(J, G_i) for all
/// classes J at once. Copies are unlabeled images: sets of edges in G_i.
///
/// Two modes share the interface:
///  - materialized: explicit per-class image sets (the descent output, where
///    sizes are verified against their thresholds);
///  - link-count rule: a copy is marked iff fewer than `fewer_than` vertices
///    of the host's top class extend every one of its edges into a host
///    edge. This is the initial ledger's rule; it is evaluated on demand
///    because copies at the top level are far too numerous to list.
class BadnessLedger {
 public:
  using ImageSet = std::set<SetFamily>;

  static BadnessLedger materialized(int level,
                                    std::map<std::string, ImageSet> marks);
  static BadnessLedger link_count_rule(int level, PartitionedHypergraph host,
                                       std::size_t fewer_than);

  int level() const { return level_; }
  bool lazy() const { return lazy_; }
  std::size_t fewer_than() const { return fewer_than_; }

  /// Is this concrete copy (edges in G_level, any order) marked? The class
  /// code keys the materialized map; the link-count rule ignores it.
  bool is_marked(const std::string& class_code, const SetFamily& copy) const;

  /// Top-class extension mask of a copy under the link-count rule: bit t set
  /// iff host top-class vertex number t completes every copy edge. Only
  /// meaningful in lazy mode.
  std::uint64_t extension_mask(const SetFamily& copy) const;

  /// Marked-copy count per class; nothing in lazy mode (unknown by design).
  std::optional<std::size_t> size_of(const std::string& class_code) const;
  const std::map<std::string, ImageSet>& entries() const { return marks_; }

 private:
  BadnessLedger() = default;

  int level_ = 0;
  bool lazy_ = false;
  std::map<std::string, ImageSet> marks_;

  // link-count rule state
  std::size_t fewer_than_ = 0;
  std::map<Edge, std::uint64_t> extends_;  // (r-1)-prefix -> top-class mask
  std::size_t top_size_ = 0;
};

/// Normalize a copy to its set form: edges sorted internally and between
/// each other, duplicates collapsed.
SetFamily normalize_family(SetFamily family);

}  // namespace homeo
