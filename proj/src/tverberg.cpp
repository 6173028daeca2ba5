#include "tvk/tverberg.hpp"

#include <algorithm>

#include "scan.hpp"

namespace tvk {

namespace {

void subsets_containing_first(const IndexSet& universe, size_t max_size,
                              const std::function<void(const IndexSet&)>& emit) {
  // tuple-lex order over subsets of `universe` that contain universe[0]
  IndexSet cur{universe[0]};
  std::function<void(size_t)> rec = [&](size_t start) {
    emit(cur);
    if (cur.size() == max_size) return;
    for (size_t i = start; i < universe.size(); ++i) {
      cur.push_back(universe[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(1);
}

} // namespace

std::vector<std::array<IndexSet, 3>> enumerate_partitions3(int n) {
  require(n >= 3, ErrorKind::input, "enumerate_partitions3: need at least 3 points");
  std::vector<std::array<IndexSet, 3>> out;
  IndexSet all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;

  subsets_containing_first(all, static_cast<size_t>(n - 2), [&](const IndexSet& b1) {
    IndexSet rest;
    std::set_difference(all.begin(), all.end(), b1.begin(), b1.end(), std::back_inserter(rest));
    subsets_containing_first(rest, rest.size() - 1, [&](const IndexSet& b2) {
      IndexSet b3;
      std::set_difference(rest.begin(), rest.end(), b2.begin(), b2.end(), std::back_inserter(b3));
      out.push_back({b1, b2, b3});
    });
  });
  return out;
}

TverbergWitness find_tverberg3(const PointConfig& config, int jobs) {
  require(config.size() >= 3, ErrorKind::precondition, "find_tverberg3: need at least 3 points");
  auto partitions = enumerate_partitions3(config.size());

  constexpr long long kGroupSize = 32;
  long long ngroups = (static_cast<long long>(partitions.size()) + kGroupSize - 1) / kGroupSize;
  auto group_fn = [&](long long g) -> std::optional<TverbergWitness> {
    long long lo = g * kGroupSize;
    long long hi = std::min<long long>(lo + kGroupSize, static_cast<long long>(partitions.size()));
    for (long long i = lo; i < hi; ++i) {
      const auto& p = partitions[static_cast<size_t>(i)];
      detail::Box b1 = detail::make_box(config, p[0]);
      detail::Box b2 = detail::make_box(config, p[1]);
      detail::Box b3 = detail::make_box(config, p[2]);
      if (!detail::boxes_meet(b1, b2, b3)) continue;
      CandidateTriple t{p};
      if (auto cert = triple_intersection(config, t)) {
        TverbergWitness w{p, std::move(*cert)};
        require(verify_witness(config, w), ErrorKind::invariant_violation, "find_tverberg3: witness failed re-verification");
        return w;
      }
    }
    return std::nullopt;
  };
  auto found = detail::first_in_groups<TverbergWitness>(ngroups, jobs, group_fn);
  if (!found)
    fail(ErrorKind::exhaustion,
         "find_tverberg3: no intersecting 3-partition (input below the 2d+3 threshold, or degenerate)");
  return std::move(found->second);
}

std::vector<std::pair<CandidateTriple, IntersectionCertificate>> brute_force_all(const PointConfig& config,
                                                                                 int jobs) {
  require(config.size() <= 12, ErrorKind::size_guard, "brute_force_all: more than 12 points");
  require(config.size() >= 3, ErrorKind::precondition, "brute_force_all: need at least 3 points");
  auto partitions = enumerate_partitions3(config.size());

  constexpr long long kGroupSize = 64;
  long long ngroups = (static_cast<long long>(partitions.size()) + kGroupSize - 1) / kGroupSize;
  std::vector<std::vector<std::pair<CandidateTriple, IntersectionCertificate>>> per_group(
      static_cast<size_t>(ngroups));
  detail::parallel_for_groups(ngroups, jobs, [&](long long g) {
    long long lo = g * kGroupSize;
    long long hi = std::min<long long>(lo + kGroupSize, static_cast<long long>(partitions.size()));
    for (long long i = lo; i < hi; ++i) {
      CandidateTriple t{partitions[static_cast<size_t>(i)]};
      if (auto cert = triple_intersection(config, t)) per_group[static_cast<size_t>(g)].emplace_back(t, std::move(*cert));
    }
  });
  std::vector<std::pair<CandidateTriple, IntersectionCertificate>> out;
  for (auto& v : per_group)
    for (auto& e : v) out.push_back(std::move(e));
  return out;
}

TverbergWitness complete_partition(const PointConfig& config, const CandidateTriple& t,
                                   const IntersectionCertificate& cert) {
  require(verify_certificate(config, t, cert), ErrorKind::precondition,
          "complete_partition: certificate does not verify for the triple");
  TverbergWitness w{t.parts, cert};
  std::vector<uint8_t> used(static_cast<size_t>(config.size()), 0);
  for (const auto& part : t.parts)
    for (int i : part) used[static_cast<size_t>(i)] = 1;
  for (int i = 0; i < config.size(); ++i)
    if (!used[static_cast<size_t>(i)]) w.parts[0].push_back(i);
  std::sort(w.parts[0].begin(), w.parts[0].end());
  return w;
}

bool verify_witness(const PointConfig& config, const TverbergWitness& w) {
  size_t total = 0;
  for (const auto& part : w.parts) total += part.size();
  if (total != static_cast<size_t>(config.size())) return false;
  CandidateTriple t{w.parts};
  try {
    t.validate(config.size()); // disjoint + nonempty + sorted; with the size check this is a partition
  } catch (const Error&) {
    return false;
  }
  return verify_certificate(config, t, w.cert);
}

} // namespace tvk
