#include "tvk/core.hpp"

#include <algorithm>
#include <set>

namespace tvk {

RatVector vec_sub(const RatVector& a, const RatVector& b) {
  require(a.size() == b.size(), ErrorKind::input, "vec_sub: dimension mismatch");
  RatVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVector vec_add(const RatVector& a, const RatVector& b) {
  require(a.size() == b.size(), ErrorKind::input, "vec_add: dimension mismatch");
  RatVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVector vec_scale(const Rat& s, const RatVector& a) {
  RatVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Rat dot(const RatVector& a, const RatVector& b) {
  require(a.size() == b.size(), ErrorKind::input, "dot: dimension mismatch");
  Rat s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat linf_norm(const RatVector& a) {
  Rat m;
  for (const Rat& x : a) {
    Rat ax = x.abs();
    if (ax > m) m = ax;
  }
  return m;
}

Rat euclid_sq(const RatVector& a, const RatVector& b) {
  require(a.size() == b.size(), ErrorKind::input, "euclid_sq: dimension mismatch");
  Rat s;
  for (size_t i = 0; i < a.size(); ++i) {
    Rat d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int rank(RatMatrix m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  for (const auto& r : m)
    require(r.size() == cols, ErrorKind::input, "rank: ragged matrix");
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      Rat f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

PointConfig::PointConfig(int d, std::vector<RatVector> pts, std::vector<std::string> lbls)
    : dim(d), points(std::move(pts)), labels(std::move(lbls)) {
  require(dim >= 1, ErrorKind::input, "PointConfig: dim must be positive");
  for (const auto& p : points)
    require(static_cast<int>(p.size()) == dim, ErrorKind::input, "PointConfig: point dimension mismatch");
  if (labels.empty()) {
    labels.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) labels.push_back("P" + std::to_string(i));
  }
  require(labels.size() == points.size(), ErrorKind::input, "PointConfig: label count mismatch");
  std::set<std::string> seen(labels.begin(), labels.end());
  require(seen.size() == labels.size(), ErrorKind::input, "PointConfig: duplicate labels");
}

PointConfig PointConfig::subset(const IndexSet& idx) const {
  std::vector<RatVector> pts;
  std::vector<std::string> lbls;
  pts.reserve(idx.size());
  for (int i : idx) {
    require(i >= 0 && i < size(), ErrorKind::input, "PointConfig::subset: index out of range");
    pts.push_back(points[static_cast<size_t>(i)]);
    lbls.push_back(labels[static_cast<size_t>(i)]);
  }
  return PointConfig(dim, std::move(pts), std::move(lbls));
}

int affine_dim(std::span<const RatVector> pts) {
  if (pts.empty()) return -1;
  if (pts.size() == 1) return 0;
  RatMatrix diffs;
  diffs.reserve(pts.size() - 1);
  for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(vec_sub(pts[i], pts[0]));
  return rank(std::move(diffs));
}

int affine_dim(const PointConfig& config, const IndexSet& subset) {
  std::vector<RatVector> pts;
  pts.reserve(subset.size());
  for (int i : subset) pts.push_back(config[i]);
  return affine_dim(pts);
}

GeneralPositionReport is_general_position(const PointConfig& config) {
  int n = config.size();
  int max_k = std::min(config.dim + 1, n);
  IndexSet subset;
  for (int k = 2; k <= max_k; ++k) {
    subset.assign(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) subset[static_cast<size_t>(i)] = i;
    while (true) {
      if (affine_dim(config, subset) < k - 1) return {false, subset};
      // next k-combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && subset[static_cast<size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++subset[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) subset[static_cast<size_t>(j)] = subset[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return {true, {}};
}

bool tuple_less(const IndexSet& a, const IndexSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {
bool subset_dfs(const IndexSet& universe, size_t start, IndexSet& cur,
                const std::function<bool(const IndexSet&)>& fn) {
  for (size_t i = start; i < universe.size(); ++i) {
    cur.push_back(universe[i]);
    if (!fn(cur)) return false;
    if (!subset_dfs(universe, i + 1, cur, fn)) return false;
    cur.pop_back();
  }
  return true;
}
} // namespace

void for_each_subset_lex(const IndexSet& universe, const std::function<bool(const IndexSet&)>& fn) {
  IndexSet cur;
  subset_dfs(universe, 0, cur, fn);
}

} // namespace tvk
