#include "tvk/vkf.hpp"

#include <algorithm>

#include "scan.hpp"

namespace tvk {

namespace {

struct VkfScan {
  const PointConfig& config;
  int part_size;
  std::vector<IndexSet> firsts; // all (2k+1)-subsets, lex order; one scan group each
  detail::PairFeasibility pair_memo;
  const std::function<bool(const VkfWitness&)>* accept = nullptr;

  VkfScan(const PointConfig& cfg, int k) : config(cfg), part_size(2 * k + 1), pair_memo(cfg) {
    IndexSet all(static_cast<size_t>(cfg.size()));
    for (int i = 0; i < cfg.size(); ++i) all[static_cast<size_t>(i)] = i;
    firsts = detail::combinations(all, part_size);
  }

  // Scans all canonical triples with the given first part (parts ordered
  // p1 < p2 < p3 tuple-lexicographically). Returns the in-group first witness.
  std::optional<VkfWitness> scan_group(long long g, int k, std::atomic<bool>* stop) {
    const IndexSet& p1 = firsts[static_cast<size_t>(g)];
    IndexSet all(static_cast<size_t>(config.size()));
    for (int i = 0; i < config.size(); ++i) all[static_cast<size_t>(i)] = i;
    IndexSet rest1;
    std::set_difference(all.begin(), all.end(), p1.begin(), p1.end(), std::back_inserter(rest1));
    if (static_cast<int>(rest1.size()) < 2 * part_size) return std::nullopt;

    detail::Box box1 = detail::make_box(config, p1);
    uint64_t mask1 = detail::index_mask(p1);
    auto seconds = detail::combinations(rest1, part_size);
    for (const IndexSet& p2 : seconds) {
      if (stop && stop->load()) return std::nullopt;
      if (!tuple_less(p1, p2)) continue;
      detail::Box box2 = detail::make_box(config, p2);
      if (!detail::boxes_meet(box1, box2)) continue;
      uint64_t mask2 = detail::index_mask(p2);
      if (!pair_memo.feasible(mask1, p1, mask2, p2)) continue;
      IndexSet rest2;
      std::set_difference(rest1.begin(), rest1.end(), p2.begin(), p2.end(), std::back_inserter(rest2));
      auto thirds = detail::combinations(rest2, part_size);
      for (const IndexSet& p3 : thirds) {
        if (!tuple_less(p2, p3)) continue;
        detail::Box box3 = detail::make_box(config, p3);
        if (!detail::boxes_meet(box1, box2, box3)) continue;
        uint64_t mask3 = detail::index_mask(p3);
        if (!pair_memo.feasible(mask1, p1, mask3, p3)) continue;
        if (!pair_memo.feasible(mask2, p2, mask3, p3)) continue;
        CandidateTriple t{{p1, p2, p3}};
        if (auto cert = triple_intersection(config, t)) {
          VkfWitness w{{p1, p2, p3}, std::move(*cert), k};
          if (accept && !(*accept)(w)) continue;
          return w;
        }
      }
    }
    return std::nullopt;
  }
};

} // namespace

VkfWitness find_vkf3(const PointConfig& config, int k, int jobs, bool fast_any_order,
                     const std::function<bool(const VkfWitness&)>& accept) {
  require(k >= 1, ErrorKind::input, "find_vkf3: k must be positive");
  require(config.dim == 3 * k, ErrorKind::precondition, "find_vkf3: config dimension must be 3k");
  require(config.size() >= 6 * k + 5, ErrorKind::precondition, "find_vkf3: need at least 6k+5 points");
  require(config.size() <= 62, ErrorKind::size_guard, "find_vkf3: bitmask scan limited to 62 points");

  VkfScan scan(config, k);
  if (accept) scan.accept = &accept;
  long long ngroups = static_cast<long long>(scan.firsts.size());
  std::optional<VkfWitness> found;
  if (fast_any_order) {
    std::atomic<bool> stop{false};
    found = detail::any_in_groups<VkfWitness>(
        ngroups, jobs, stop, [&](long long g) { return scan.scan_group(g, k, &stop); });
  } else {
    auto r = detail::first_in_groups<VkfWitness>(ngroups, jobs,
                                                 [&](long long g) { return scan.scan_group(g, k, nullptr); });
    if (r) found = std::move(r->second);
  }
  if (!found) {
    if (accept)
      fail(ErrorKind::exhaustion, "find_vkf3: no certified triple passed the acceptance filter");
    fail(ErrorKind::exhaustion,
         "find_vkf3: no certified triple among all disjoint (2k+1)-subsets; the statement admits no failure at "
         "the 6k+5 threshold, so this signals a dimension/count mismatch or a bug");
  }
  require(verify_vkf(config, *found), ErrorKind::invariant_violation, "find_vkf3: witness failed re-verification");
  return std::move(*found);
}

bool verify_vkf(const PointConfig& config, const VkfWitness& w) {
  if (w.k < 1 || config.dim != 3 * w.k) return false;
  CandidateTriple t{w.parts};
  try {
    t.validate(config.size());
  } catch (const Error&) {
    return false;
  }
  for (const auto& part : w.parts)
    if (static_cast<int>(part.size()) != 2 * w.k + 1) return false;
  return verify_certificate(config, t, w.cert);
}

} // namespace tvk
