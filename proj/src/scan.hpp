#pragma once

// Internal helpers shared by the finders and the reduction pipeline: candidate
// enumeration, conservative bounding-box filters, memoized pairwise hull
// feasibility, and deterministic parallel scan drivers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "tvk/convexity.hpp"

namespace tvk::detail {

// Outward-rounded double bounding box. Only used to reject candidates whose
// boxes certainly do not meet; one-ulp slack covers the rational-to-double
// rounding, so a reject is always sound.
struct Box {
  std::vector<double> lo, hi;
};

inline Box make_box(const PointConfig& config, const IndexSet& s) {
  Box b;
  b.lo.assign(static_cast<size_t>(config.dim), std::numeric_limits<double>::infinity());
  b.hi.assign(static_cast<size_t>(config.dim), -std::numeric_limits<double>::infinity());
  for (int i : s) {
    for (int c = 0; c < config.dim; ++c) {
      double v = config[i][static_cast<size_t>(c)].to_double();
      double vlo = std::nextafter(v, -std::numeric_limits<double>::infinity());
      double vhi = std::nextafter(v, std::numeric_limits<double>::infinity());
      if (vlo < b.lo[static_cast<size_t>(c)]) b.lo[static_cast<size_t>(c)] = vlo;
      if (vhi > b.hi[static_cast<size_t>(c)]) b.hi[static_cast<size_t>(c)] = vhi;
    }
  }
  return b;
}

inline bool boxes_meet(const Box& a, const Box& b) {
  for (size_t c = 0; c < a.lo.size(); ++c)
    if (a.lo[c] > b.hi[c] || b.lo[c] > a.hi[c]) return false;
  return true;
}

inline bool boxes_meet(const Box& a, const Box& b, const Box& c) {
  for (size_t i = 0; i < a.lo.size(); ++i) {
    double lo = std::max(a.lo[i], std::max(b.lo[i], c.lo[i]));
    double hi = std::min(a.hi[i], std::min(b.hi[i], c.hi[i]));
    if (lo > hi) return false;
  }
  return true;
}

/// Memoized, thread-safe "do these two hulls intersect" decisions keyed by
/// subset bitmasks. The exact LP runs at most once per unordered pair.
class PairFeasibility {
public:
  explicit PairFeasibility(const PointConfig& config) : config_(config) {}

  bool feasible(uint64_t mask_a, const IndexSet& a, uint64_t mask_b, const IndexSet& b) {
    uint64_t key = mask_a < mask_b ? (mask_a * 0x9E3779B97F4A7C15ull) ^ mask_b : (mask_b * 0x9E3779B97F4A7C15ull) ^ mask_a;
    uint64_t lo = mask_a < mask_b ? mask_a : mask_b;
    uint64_t hi = mask_a < mask_b ? mask_b : mask_a;
    Shard& shard = shards_[key % kShards];
    {
      std::lock_guard<std::mutex> g(shard.mu);
      auto it = shard.map.find({lo, hi});
      if (it != shard.map.end()) return it->second;
    }
    bool ok = pair_intersection_point(config_, mask_a < mask_b ? a : b, mask_a < mask_b ? b : a).has_value();
    std::lock_guard<std::mutex> g(shard.mu);
    shard.map.emplace(std::make_pair(lo, hi), ok);
    return ok;
  }

private:
  struct PairHash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
      return static_cast<size_t>(p.first * 0x9E3779B97F4A7C15ull ^ (p.second + 0x7f4a7c15u));
    }
  };
  struct Shard {
    std::mutex mu;
    std::unordered_map<std::pair<uint64_t, uint64_t>, bool, PairHash> map;
  };
  static constexpr size_t kShards = 16;
  const PointConfig& config_;
  Shard shards_[kShards];
};

inline uint64_t index_mask(const IndexSet& s) {
  uint64_t m = 0;
  for (int i : s) m |= (1ull << i);
  return m;
}

/// All size-k combinations of `universe`, tuple-lexicographic order.
inline std::vector<IndexSet> combinations(const IndexSet& universe, int k) {
  std::vector<IndexSet> out;
  if (k < 0 || k > static_cast<int>(universe.size())) return out;
  IndexSet cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    size_t need = static_cast<size_t>(k) - cur.size();
    for (size_t i = start; i + need <= universe.size(); ++i) {
      cur.push_back(universe[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Runs group_fn over groups 0..ngroups-1 and returns the result from the
/// smallest-numbered group that produced one. Workers skip groups above the
/// current best, so the answer is canonical-first regardless of scheduling.
template <typename R>
std::optional<std::pair<long long, R>> first_in_groups(long long ngroups, int jobs,
                                                       const std::function<std::optional<R>(long long)>& group_fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || ngroups <= 1) {
    for (long long g = 0; g < ngroups; ++g)
      if (auto r = group_fn(g)) return std::make_pair(g, std::move(*r));
    return std::nullopt;
  }
  std::atomic<long long> next{0};
  std::atomic<long long> best{ngroups};
  std::mutex mu;
  std::optional<std::pair<long long, R>> best_result;
  auto worker = [&]() {
    while (true) {
      long long g = next.fetch_add(1);
      if (g >= ngroups) return;
      if (g >= best.load()) continue;
      auto r = group_fn(g);
      if (!r) continue;
      std::lock_guard<std::mutex> lock(mu);
      if (!best_result || g < best_result->first) {
        best_result = std::make_pair(g, std::move(*r));
        long long cur = best.load();
        while (g < cur && !best.compare_exchange_weak(cur, g)) {
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return best_result;
}

/// Like first_in_groups but stops at the first result found in any group
/// ("fast mode": any valid result, schedule-dependent choice).
template <typename R>
std::optional<R> any_in_groups(long long ngroups, int jobs, std::atomic<bool>& stop,
                               const std::function<std::optional<R>(long long)>& group_fn) {
  jobs = std::max(1, jobs);
  std::atomic<long long> next{0};
  std::mutex mu;
  std::optional<R> result;
  auto worker = [&]() {
    while (!stop.load()) {
      long long g = next.fetch_add(1);
      if (g >= ngroups) return;
      auto r = group_fn(g);
      if (!r) continue;
      stop.store(true);
      std::lock_guard<std::mutex> lock(mu);
      if (!result) result = std::move(*r);
      return;
    }
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return result;
}

/// Plain ordered-claim parallel loop; fn must handle its own accumulation.
inline void parallel_for_groups(long long ngroups, int jobs, const std::function<void(long long)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || ngroups <= 1) {
    for (long long g = 0; g < ngroups; ++g) fn(g);
    return;
  }
  std::atomic<long long> next{0};
  auto worker = [&]() {
    while (true) {
      long long g = next.fetch_add(1);
      if (g >= ngroups) return;
      fn(g);
    }
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

} // namespace tvk::detail
