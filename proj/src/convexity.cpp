#include "tvk/convexity.hpp"

#include <algorithm>

namespace tvk {

namespace {

void check_indices(const PointConfig& config, const IndexSet& S, const char* who) {
  require(!S.empty(), ErrorKind::input, std::string(who) + ": empty index set");
  int prev = -1;
  for (int i : S) {
    require(i >= 0 && i < config.size(), ErrorKind::input, std::string(who) + ": index out of range");
    require(i > prev, ErrorKind::input, std::string(who) + ": indices must be sorted and distinct");
    prev = i;
  }
}

// Rows expressing "sum(lambda_i * p_i) - sum(mu_j * q_j) = 0" coordinate-wise,
// written into lp rows starting at row0; columns [offA, offA+|A|) and [offB, ...).
void emit_combo_difference(LinearProgram& lp, const PointConfig& config, const IndexSet& A, int offA,
                           const IndexSet& B, int offB, int row0) {
  for (int c = 0; c < config.dim; ++c) {
    RatVector& row = lp.a_eq[static_cast<size_t>(row0 + c)];
    for (size_t j = 0; j < A.size(); ++j) row[static_cast<size_t>(offA) + j] += config[A[j]][static_cast<size_t>(c)];
    for (size_t j = 0; j < B.size(); ++j) row[static_cast<size_t>(offB) + j] -= config[B[j]][static_cast<size_t>(c)];
  }
}

void emit_sum_row(LinearProgram& lp, int off, int count, int row) {
  for (int j = 0; j < count; ++j) lp.a_eq[static_cast<size_t>(row)][static_cast<size_t>(off + j)] = Rat(1);
  lp.b_eq[static_cast<size_t>(row)] = Rat(1);
}

LinearProgram make_triple_lp(const PointConfig& config, const CandidateTriple& t) {
  int s1 = static_cast<int>(t.parts[0].size());
  int s2 = static_cast<int>(t.parts[1].size());
  int s3 = static_cast<int>(t.parts[2].size());
  int nvars = s1 + s2 + s3;
  int n = config.dim;
  LinearProgram lp;
  lp.num_vars = nvars;
  lp.nonneg.assign(static_cast<size_t>(nvars), 1);
  lp.objective.assign(static_cast<size_t>(nvars), Rat());
  lp.a_eq.assign(static_cast<size_t>(2 * n + 3), RatVector(static_cast<size_t>(nvars)));
  lp.b_eq.assign(static_cast<size_t>(2 * n + 3), Rat());
  emit_combo_difference(lp, config, t.parts[0], 0, t.parts[1], s1, 0);
  emit_combo_difference(lp, config, t.parts[0], 0, t.parts[2], s1 + s2, n);
  emit_sum_row(lp, 0, s1, 2 * n);
  emit_sum_row(lp, s1, s2, 2 * n + 1);
  emit_sum_row(lp, s1 + s2, s3, 2 * n + 2);
  return lp;
}

IntersectionCertificate certificate_from_solution(const PointConfig& config, const CandidateTriple& t,
                                                  const RatVector& x) {
  IntersectionCertificate cert;
  int off = 0;
  for (int part = 0; part < 3; ++part) {
    for (size_t j = 0; j < t.parts[static_cast<size_t>(part)].size(); ++j) {
      const Rat& w = x[static_cast<size_t>(off) + j];
      if (w.sgn() > 0) cert.coefficients[static_cast<size_t>(part)].emplace_back(t.parts[static_cast<size_t>(part)][j], w);
    }
    off += static_cast<int>(t.parts[static_cast<size_t>(part)].size());
  }
  cert.common_point.assign(static_cast<size_t>(config.dim), Rat());
  for (const auto& [idx, w] : cert.coefficients[0])
    for (int c = 0; c < config.dim; ++c) cert.common_point[static_cast<size_t>(c)] += w * config[idx][static_cast<size_t>(c)];
  return cert;
}

// Canonical affine dependence over the given points: mu with sum(mu) = 0,
// sum(mu_i p_i) = 0, first free column set to 1. Nothing when independent.
std::optional<RatVector> affine_dependence(const std::vector<RatVector>& pts) {
  if (pts.empty()) return std::nullopt;
  size_t m = pts.size();
  size_t rows = pts[0].size() + 1;
  RatMatrix a(rows, RatVector(m));
  for (size_t j = 0; j < m; ++j) {
    for (size_t c = 0; c + 1 < rows; ++c) a[c][j] = pts[j][c];
    a[rows - 1][j] = Rat(1);
  }
  // row echelon with recorded pivot columns
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < m && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    Rat inv = a[r][c];
    for (size_t j = c; j < m; ++j) a[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rat f = a[i][c];
      for (size_t j = c; j < m; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (pivot_col.size() == m) return std::nullopt;
  // first free column
  int free_col = 0;
  {
    std::vector<uint8_t> is_pivot(m, 0);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = 1;
    while (is_pivot[static_cast<size_t>(free_col)]) ++free_col;
  }
  RatVector mu(m, Rat());
  mu[static_cast<size_t>(free_col)] = Rat(1);
  for (size_t i = 0; i < pivot_col.size(); ++i)
    mu[static_cast<size_t>(pivot_col[i])] = -a[i][static_cast<size_t>(free_col)];
  return mu;
}

} // namespace

std::optional<RatVector> barycentric_coordinates(const PointConfig& config, const RatVector& q,
                                                 const IndexSet& simplex) {
  size_t m = simplex.size();
  size_t rows = static_cast<size_t>(config.dim) + 1;
  RatMatrix a(rows, RatVector(m + 1));
  for (size_t j = 0; j < m; ++j) {
    for (int c = 0; c < config.dim; ++c) a[static_cast<size_t>(c)][j] = config[simplex[j]][static_cast<size_t>(c)];
    a[rows - 1][j] = Rat(1);
  }
  for (int c = 0; c < config.dim; ++c) a[static_cast<size_t>(c)][m] = q[static_cast<size_t>(c)];
  a[rows - 1][m] = Rat(1);

  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < m && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    Rat inv = a[r][c];
    for (size_t j = c; j <= m; ++j) a[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rat f = a[i][c];
      for (size_t j = c; j <= m; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (pivot_col.size() != m) return std::nullopt; // dependent input, caller's error
  for (size_t i = r; i < rows; ++i)
    if (!a[i][m].is_zero()) return std::nullopt; // inconsistent: q outside the affine hull
  RatVector beta(m);
  for (size_t i = 0; i < m; ++i) beta[static_cast<size_t>(pivot_col[i])] = a[i][m];
  return beta;
}

void CandidateTriple::validate(int config_size) const {
  std::vector<uint8_t> used(static_cast<size_t>(config_size), 0);
  for (const auto& part : parts) {
    require(!part.empty(), ErrorKind::input, "CandidateTriple: empty part");
    int prev = -1;
    for (int i : part) {
      require(i >= 0 && i < config_size, ErrorKind::input, "CandidateTriple: index out of range");
      require(i > prev, ErrorKind::input, "CandidateTriple: part not sorted");
      require(!used[static_cast<size_t>(i)], ErrorKind::input, "CandidateTriple: parts not disjoint");
      used[static_cast<size_t>(i)] = 1;
      prev = i;
    }
  }
}

std::optional<RatVector> hull_membership(const PointConfig& config, const RatVector& q, const IndexSet& S) {
  require(static_cast<int>(q.size()) == config.dim, ErrorKind::input, "hull_membership: dimension mismatch");
  check_indices(config, S, "hull_membership");
  LinearProgram lp;
  lp.num_vars = static_cast<int>(S.size());
  lp.nonneg.assign(S.size(), 1);
  lp.objective.assign(S.size(), Rat());
  lp.a_eq.assign(static_cast<size_t>(config.dim) + 1, RatVector(S.size()));
  lp.b_eq.assign(static_cast<size_t>(config.dim) + 1, Rat());
  for (int c = 0; c < config.dim; ++c) {
    for (size_t j = 0; j < S.size(); ++j) lp.a_eq[static_cast<size_t>(c)][j] = config[S[j]][static_cast<size_t>(c)];
    lp.b_eq[static_cast<size_t>(c)] = q[static_cast<size_t>(c)];
  }
  emit_sum_row(lp, 0, static_cast<int>(S.size()), config.dim);
  LPOutcome out = solve(lp);
  if (out.status == LPStatus::infeasible) return std::nullopt;
  require(out.status == LPStatus::optimal, ErrorKind::internal, "hull_membership: unexpected LP status");
  return out.solution;
}

std::optional<IntersectionCertificate> triple_intersection(const PointConfig& config, const CandidateTriple& t) {
  t.validate(config.size());
  LinearProgram lp = make_triple_lp(config, t);
  LPOutcome out = solve(lp);
  if (out.status == LPStatus::infeasible) return std::nullopt;
  require(out.status == LPStatus::optimal, ErrorKind::internal, "triple_intersection: unexpected LP status");
  return certificate_from_solution(config, t, *out.solution);
}

std::optional<std::pair<Rat, IntersectionCertificate>> min_last_coordinate(const PointConfig& config,
                                                                           const CandidateTriple& t) {
  t.validate(config.size());
  LinearProgram lp = make_triple_lp(config, t);
  // objective: last coordinate of the common point, written over part 1.
  for (size_t j = 0; j < t.parts[0].size(); ++j)
    lp.objective[j] = config[t.parts[0][j]][static_cast<size_t>(config.dim) - 1];
  LPOutcome out = solve(lp);
  if (out.status == LPStatus::infeasible) return std::nullopt;
  require(out.status == LPStatus::optimal, ErrorKind::internal,
          "min_last_coordinate: unbounded over bounded hulls");
  IntersectionCertificate cert = certificate_from_solution(config, t, *out.solution);
  return std::make_pair(*out.value, std::move(cert));
}

IndexSet caratheodory_reduce(const PointConfig& config, const RatVector& q, const IndexSet& S) {
  check_indices(config, S, "caratheodory_reduce");
  require(static_cast<int>(q.size()) == config.dim, ErrorKind::input, "caratheodory_reduce: dimension mismatch");

  // Deterministic starting representation: minimize sum(position * weight).
  LinearProgram lp;
  lp.num_vars = static_cast<int>(S.size());
  lp.nonneg.assign(S.size(), 1);
  lp.objective.resize(S.size());
  for (size_t j = 0; j < S.size(); ++j) lp.objective[j] = Rat(static_cast<long long>(j));
  lp.a_eq.assign(static_cast<size_t>(config.dim) + 1, RatVector(S.size()));
  lp.b_eq.assign(static_cast<size_t>(config.dim) + 1, Rat());
  for (int c = 0; c < config.dim; ++c) {
    for (size_t j = 0; j < S.size(); ++j) lp.a_eq[static_cast<size_t>(c)][j] = config[S[j]][static_cast<size_t>(c)];
    lp.b_eq[static_cast<size_t>(c)] = q[static_cast<size_t>(c)];
  }
  emit_sum_row(lp, 0, static_cast<int>(S.size()), config.dim);
  LPOutcome out = solve(lp);
  require(out.status == LPStatus::optimal, ErrorKind::precondition, "caratheodory_reduce: q outside the hull");

  IndexSet support;
  RatVector weights;
  for (size_t j = 0; j < S.size(); ++j) {
    if ((*out.solution)[j].sgn() > 0) {
      support.push_back(S[j]);
      weights.push_back((*out.solution)[j]);
    }
  }

  // Classical step: zero a coefficient along an affine dependence until the
  // support is affinely independent. The LP vertex is already independent, so
  // this loop is normally a no-op; it also serves caller-supplied weights.
  while (true) {
    std::vector<RatVector> pts;
    pts.reserve(support.size());
    for (int i : support) pts.push_back(config[i]);
    auto mu = affine_dependence(pts);
    if (!mu) break;
    bool has_pos = false;
    for (const Rat& v : *mu)
      if (v.sgn() > 0) has_pos = true;
    if (!has_pos)
      for (Rat& v : *mu) v = -v;
    Rat step;
    bool first = true;
    for (size_t i = 0; i < support.size(); ++i) {
      if ((*mu)[i].sgn() <= 0) continue;
      Rat ratio = weights[i] / (*mu)[i];
      if (first || ratio < step) {
        step = ratio;
        first = false;
      }
    }
    IndexSet next_support;
    RatVector next_weights;
    for (size_t i = 0; i < support.size(); ++i) {
      Rat w = weights[i] - step * (*mu)[i];
      if (w.sgn() > 0) {
        next_support.push_back(support[i]);
        next_weights.push_back(w);
      }
    }
    support = std::move(next_support);
    weights = std::move(next_weights);
  }
  return support;
}

IndexSet carrier_face(const PointConfig& config, const RatVector& q, const IndexSet& simplex) {
  check_indices(config, simplex, "carrier_face");
  require(static_cast<int>(q.size()) == config.dim, ErrorKind::input, "carrier_face: dimension mismatch");
  require(affine_dim(config, simplex) == static_cast<int>(simplex.size()) - 1, ErrorKind::precondition,
          "carrier_face: simplex must be affinely independent");
  auto beta = barycentric_coordinates(config, q, simplex);
  require(beta.has_value(), ErrorKind::precondition, "carrier_face: q outside the affine hull");
  IndexSet face;
  for (size_t i = 0; i < simplex.size(); ++i) {
    int s = (*beta)[i].sgn();
    require(s >= 0, ErrorKind::precondition, "carrier_face: q outside the simplex");
    if (s > 0) face.push_back(simplex[i]);
  }
  return face;
}

bool is_vertex(const PointConfig& config, int i) {
  require(i >= 0 && i < config.size(), ErrorKind::input, "is_vertex: index out of range");
  if (config.size() == 1) return true;
  IndexSet others;
  for (int j = 0; j < config.size(); ++j)
    if (j != i) others.push_back(j);
  return !hull_membership(config, config[i], others).has_value();
}

Rat linf_distance_lower(const PointConfig& config, const IndexSet& P, const IndexSet& Q1, const IndexSet& Q2) {
  check_indices(config, P, "linf_distance_lower");
  check_indices(config, Q1, "linf_distance_lower");
  check_indices(config, Q2, "linf_distance_lower");
  int n = config.dim;
  int p = static_cast<int>(P.size()), q1 = static_cast<int>(Q1.size()), q2 = static_cast<int>(Q2.size());
  int nvars = p + q1 + q2 + 1; // trailing t
  LinearProgram lp;
  lp.num_vars = nvars;
  lp.nonneg.assign(static_cast<size_t>(nvars), 1);
  lp.objective.assign(static_cast<size_t>(nvars), Rat());
  lp.objective[static_cast<size_t>(nvars) - 1] = Rat(1);
  lp.a_eq.assign(static_cast<size_t>(n) + 3, RatVector(static_cast<size_t>(nvars)));
  lp.b_eq.assign(static_cast<size_t>(n) + 3, Rat());
  emit_combo_difference(lp, config, Q1, p, Q2, p + q1, 0);
  emit_sum_row(lp, 0, p, n);
  emit_sum_row(lp, p, q1, n + 1);
  emit_sum_row(lp, p + q1, q2, n + 2);
  lp.a_le.assign(static_cast<size_t>(2 * n), RatVector(static_cast<size_t>(nvars)));
  lp.b_le.assign(static_cast<size_t>(2 * n), Rat());
  for (int c = 0; c < n; ++c) {
    RatVector& up = lp.a_le[static_cast<size_t>(2 * c)];
    RatVector& dn = lp.a_le[static_cast<size_t>(2 * c + 1)];
    for (int j = 0; j < p; ++j) {
      up[static_cast<size_t>(j)] = config[P[static_cast<size_t>(j)]][static_cast<size_t>(c)];
      dn[static_cast<size_t>(j)] = -config[P[static_cast<size_t>(j)]][static_cast<size_t>(c)];
    }
    for (int j = 0; j < q1; ++j) {
      up[static_cast<size_t>(p + j)] = -config[Q1[static_cast<size_t>(j)]][static_cast<size_t>(c)];
      dn[static_cast<size_t>(p + j)] = config[Q1[static_cast<size_t>(j)]][static_cast<size_t>(c)];
    }
    up[static_cast<size_t>(nvars) - 1] = Rat(-1);
    dn[static_cast<size_t>(nvars) - 1] = Rat(-1);
  }
  LPOutcome out = solve(lp);
  require(out.status != LPStatus::infeasible, ErrorKind::precondition,
          "linf_distance_lower: <Q1> and <Q2> do not intersect");
  require(out.status == LPStatus::optimal, ErrorKind::internal, "linf_distance_lower: unbounded");
  return *out.value;
}

bool verify_certificate(const PointConfig& config, const CandidateTriple& t, const IntersectionCertificate& cert) {
  try {
    t.validate(config.size());
  } catch (const Error&) {
    return false;
  }
  if (static_cast<int>(cert.common_point.size()) != config.dim) return false;
  for (int part = 0; part < 3; ++part) {
    Rat total;
    RatVector combo(static_cast<size_t>(config.dim), Rat());
    for (const auto& [idx, w] : cert.coefficients[static_cast<size_t>(part)]) {
      if (w.sgn() < 0) return false;
      if (!std::binary_search(t.parts[static_cast<size_t>(part)].begin(), t.parts[static_cast<size_t>(part)].end(), idx))
        return false;
      total += w;
      for (int c = 0; c < config.dim; ++c) combo[static_cast<size_t>(c)] += w * config[idx][static_cast<size_t>(c)];
    }
    if (total != Rat(1)) return false;
    if (combo != cert.common_point) return false;
  }
  return true;
}

std::pair<Rat, RatVector> linf_point_hull_nearest(const PointConfig& config, const RatVector& q, const IndexSet& S) {
  check_indices(config, S, "linf_point_hull_nearest");
  require(static_cast<int>(q.size()) == config.dim, ErrorKind::input, "linf_point_hull_nearest: dimension mismatch");
  int n = config.dim;
  int m = static_cast<int>(S.size());
  LinearProgram lp;
  lp.num_vars = m + 1;
  lp.nonneg.assign(static_cast<size_t>(m) + 1, 1);
  lp.objective.assign(static_cast<size_t>(m) + 1, Rat());
  lp.objective[static_cast<size_t>(m)] = Rat(1);
  lp.a_eq.assign(1, RatVector(static_cast<size_t>(m) + 1));
  lp.b_eq.assign(1, Rat());
  emit_sum_row(lp, 0, m, 0);
  lp.a_le.assign(static_cast<size_t>(2 * n), RatVector(static_cast<size_t>(m) + 1));
  lp.b_le.assign(static_cast<size_t>(2 * n), Rat());
  for (int c = 0; c < n; ++c) {
    RatVector& up = lp.a_le[static_cast<size_t>(2 * c)]; // sum(mu s) - t <= q_c  ... etc.
    RatVector& dn = lp.a_le[static_cast<size_t>(2 * c + 1)];
    for (int j = 0; j < m; ++j) {
      up[static_cast<size_t>(j)] = config[S[static_cast<size_t>(j)]][static_cast<size_t>(c)];
      dn[static_cast<size_t>(j)] = -config[S[static_cast<size_t>(j)]][static_cast<size_t>(c)];
    }
    up[static_cast<size_t>(m)] = Rat(-1);
    dn[static_cast<size_t>(m)] = Rat(-1);
    lp.b_le[static_cast<size_t>(2 * c)] = q[static_cast<size_t>(c)];
    lp.b_le[static_cast<size_t>(2 * c + 1)] = -q[static_cast<size_t>(c)];
  }
  LPOutcome out = solve(lp);
  require(out.status == LPStatus::optimal, ErrorKind::internal, "linf_point_hull_nearest: LP not optimal");
  RatVector y(static_cast<size_t>(n), Rat());
  for (int j = 0; j < m; ++j)
    for (int c = 0; c < n; ++c)
      y[static_cast<size_t>(c)] += (*out.solution)[static_cast<size_t>(j)] * config[S[static_cast<size_t>(j)]][static_cast<size_t>(c)];
  return {*out.value, std::move(y)};
}

Rat linf_point_hull_distance(const PointConfig& config, const RatVector& q, const IndexSet& S) {
  return linf_point_hull_nearest(config, q, S).first;
}

std::optional<RatVector> pair_intersection_point(const PointConfig& config, const IndexSet& S1, const IndexSet& S2) {
  check_indices(config, S1, "pair_intersection_point");
  check_indices(config, S2, "pair_intersection_point");
  int n = config.dim;
  int m1 = static_cast<int>(S1.size()), m2 = static_cast<int>(S2.size());
  LinearProgram lp;
  lp.num_vars = m1 + m2;
  lp.nonneg.assign(static_cast<size_t>(m1 + m2), 1);
  lp.objective.assign(static_cast<size_t>(m1 + m2), Rat());
  lp.a_eq.assign(static_cast<size_t>(n) + 2, RatVector(static_cast<size_t>(m1 + m2)));
  lp.b_eq.assign(static_cast<size_t>(n) + 2, Rat());
  emit_combo_difference(lp, config, S1, 0, S2, m1, 0);
  emit_sum_row(lp, 0, m1, n);
  emit_sum_row(lp, m1, m2, n + 1);
  LPOutcome out = solve(lp);
  if (out.status == LPStatus::infeasible) return std::nullopt;
  require(out.status == LPStatus::optimal, ErrorKind::internal, "pair_intersection_point: unexpected status");
  RatVector z(static_cast<size_t>(n), Rat());
  for (int j = 0; j < m1; ++j)
    for (int c = 0; c < n; ++c)
      z[static_cast<size_t>(c)] += (*out.solution)[static_cast<size_t>(j)] * config[S1[static_cast<size_t>(j)]][static_cast<size_t>(c)];
  return z;
}

} // namespace tvk
