#include "homeo/ledger.hpp"

#include <algorithm>
#include <bit>

namespace homeo {

SetFamily normalize_family(SetFamily family) {
  for (auto& e : family) std::sort(e.begin(), e.end());
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

BadnessLedger BadnessLedger::materialized(int level,
                                          std::map<std::string, ImageSet> marks) {
  if (level < 1) throw DomainError("ledger level must be at least 1");
  BadnessLedger l;
  l.level_ = level;
  for (auto& [code, images] : marks) {
    ImageSet norm;
    for (const auto& img : images) {
      if (img.empty()) throw DomainError("marked copy must have edges");
      norm.insert(normalize_family(img));
    }
    l.marks_.emplace(code, std::move(norm));
  }
  return l;
}

BadnessLedger BadnessLedger::link_count_rule(int level,
                                             PartitionedHypergraph host,
                                             std::size_t fewer_than) {
  const int r = host.uniformity();
  if (level != r - 1)
    throw DomainError("the link-count rule applies one level below the host");
  const auto& top = host.classes()[r - 1];
  if (top.size() > 64) throw ResourceError("host top class too large");

  BadnessLedger l;
  l.level_ = level;
  l.lazy_ = true;
  l.fewer_than_ = fewer_than;
  l.top_size_ = top.size();
  for (const auto& e : host.edges()) {
    Edge prefix;
    Vertex top_v = -1;
    for (Vertex v : e) {
      if (host.class_of(v) == r)
        top_v = v;
      else
        prefix.push_back(v);
    }
    std::size_t t = std::lower_bound(top.begin(), top.end(), top_v) - top.begin();
    l.extends_[prefix] |= 1ULL << t;
  }
  return l;
}

std::uint64_t BadnessLedger::extension_mask(const SetFamily& copy) const {
  if (!lazy_) throw DomainError("extension masks exist under the link-count rule only");
  if (copy.empty()) throw DomainError("copy must have edges");
  std::uint64_t mask = top_size_ == 64 ? ~0ULL : (1ULL << top_size_) - 1;
  for (const auto& raw : copy) {
    Edge e = raw;
    std::sort(e.begin(), e.end());
    auto it = extends_.find(e);
    mask &= it == extends_.end() ? 0 : it->second;
    if (!mask) break;
  }
  return mask;
}

bool BadnessLedger::is_marked(const std::string& class_code,
                              const SetFamily& copy) const {
  if (lazy_)
    return static_cast<std::size_t>(std::popcount(extension_mask(copy))) <
           fewer_than_;
  auto it = marks_.find(class_code);
  if (it == marks_.end()) return false;
  return it->second.count(normalize_family(copy)) > 0;
}

std::optional<std::size_t> BadnessLedger::size_of(
    const std::string& class_code) const {
  if (lazy_) return std::nullopt;
  auto it = marks_.find(class_code);
  return it == marks_.end() ? 0 : it->second.size();
}

}  // namespace homeo
