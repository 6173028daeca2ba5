#include <algorithm>

#include "scan.hpp"
#include "tvk/reduction.hpp"

// Lemma-4 machinery: qualifying pairs, the minimum aff-hull angle alpha via the
// largest generalized eigenvalue cos^2(alpha) of the direction-space cross-Gram
// pencil, and a certified rational lower bound on epsilon*sin(alpha/2).

namespace tvk {

namespace {

using Poly = std::vector<Rat>; // coefficients, low degree first

void poly_trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(Rat(static_cast<long long>(i)) * p[i]);
  poly_trim(d);
  return d;
}

Rat poly_eval(const Poly& p, const Rat& x) {
  Rat v;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

// remainder of a modulo b; b nonzero
Poly poly_rem(Poly a, const Poly& b) {
  poly_trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  return a;
}

Poly poly_monic(Poly p) {
  poly_trim(p);
  if (p.empty()) return p;
  Rat lead = p.back();
  for (Rat& c : p) c /= lead;
  return p;
}

Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = poly_monic(std::move(r));
  }
  return poly_monic(std::move(a));
}

Poly poly_div_exact(Poly a, const Poly& b) {
  poly_trim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat());
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    q[shift] = f;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  require(a.empty(), ErrorKind::internal, "poly_div_exact: nonzero remainder");
  poly_trim(q);
  return q;
}

// deflation by a known simple rational root
Poly poly_deflate(const Poly& p, const Rat& root) {
  Poly q(p.size() - 1);
  Rat carry = p.back();
  for (size_t i = p.size() - 1; i-- > 0;) {
    q[i] = carry;
    carry = p[i] + carry * root;
  }
  require(carry.is_zero(), ErrorKind::internal, "poly_deflate: not a root");
  poly_trim(q);
  return q;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  chain.push_back(p);
  Poly d = poly_derivative(p);
  if (!d.empty()) chain.push_back(d);
  while (chain.back().size() > 1) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (Rat& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

int variations(const std::vector<int>& signs) {
  int v = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

// distinct roots of p strictly greater than x; requires p(x) != 0
int roots_greater(const std::vector<Poly>& chain, const Rat& x) {
  std::vector<int> at_x, at_inf;
  for (const Poly& q : chain) {
    at_x.push_back(poly_eval(q, x).sgn());
    at_inf.push_back(q.empty() ? 0 : q.back().sgn());
  }
  return variations(at_x) - variations(at_inf);
}

// ---- small exact matrix helpers ----

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  size_t n = a.size(), m = b[0].size(), k = b.size();
  RatMatrix c(n, RatVector(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RatMatrix mat_transpose(const RatMatrix& a) {
  RatMatrix t(a[0].size(), RatVector(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

RatMatrix mat_inverse(RatMatrix a) {
  size_t n = a.size();
  RatMatrix inv(n, RatVector(n));
  for (size_t i = 0; i < n; ++i) inv[i][i] = Rat(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    require(piv < n, ErrorKind::internal, "mat_inverse: singular matrix");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rat f = a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] /= f;
      inv[c][j] /= f;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      Rat g = a[i][c];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] -= g * a[c][j];
        inv[i][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

// Faddeev-LeVerrier: monic characteristic polynomial of a square matrix.
Poly char_poly(const RatMatrix& x) {
  size_t n = x.size();
  Poly p(n + 1);
  p[n] = Rat(1);
  RatMatrix mk = x;
  for (size_t k = 1; k <= n; ++k) {
    Rat tr;
    for (size_t i = 0; i < n; ++i) tr += mk[i][i];
    Rat ck = tr / Rat(static_cast<long long>(k));
    p[n - k] = -ck;
    if (k < n) {
      for (size_t i = 0; i < n; ++i) mk[i][i] -= ck;
      mk = mat_mul(x, mk);
    }
  }
  return p;
}

// Orthogonal-complement-free direction basis: rows spanning the differences.
RatMatrix direction_basis(const PointConfig& config, const IndexSet& s) {
  RatMatrix rows;
  RatMatrix echelon;
  for (size_t i = 1; i < s.size(); ++i) {
    RatVector d = vec_sub(config[s[i]], config[s[0]]);
    RatMatrix test = echelon;
    test.push_back(d);
    if (rank(test) > static_cast<int>(echelon.size())) {
      echelon.push_back(d);
      rows.push_back(std::move(d));
    }
  }
  return rows;
}

// Certified enclosure of the largest root of p (all roots real, within [0,1]).
std::pair<Rat, Rat> enclose_largest_root(const Poly& p_in, int iters) {
  Poly p = p_in;
  Poly g = poly_gcd(p, poly_derivative(p));
  if (g.size() > 1) p = poly_div_exact(p, g); // square-free part
  auto chain = sturm_chain(p);
  Rat lo(-1), hi(2);
  require(roots_greater(chain, lo) >= 1, ErrorKind::internal, "enclose_largest_root: no real root");
  require(roots_greater(chain, hi) == 0, ErrorKind::internal, "enclose_largest_root: root above 1");
  for (int it = 0; it < iters; ++it) {
    Rat mid = (lo + hi) / Rat(2);
    if (poly_eval(p, mid).is_zero()) {
      Poly q = poly_deflate(p, mid);
      if (q.size() <= 1 || roots_greater(sturm_chain(q), mid) == 0) return {mid, mid};
      lo = mid;
      continue;
    }
    if (roots_greater(chain, mid) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  Rat zero(0), one(1);
  return {lo < zero ? zero : lo, hi > one ? one : hi};
}

// Largest dyadic y with y^2 <= v (lower) / smallest with y^2 >= v (upper), v in [0,1].
Rat sqrt_lower(const Rat& v, int iters) {
  Rat lo(0), hi(1);
  for (int i = 0; i < iters; ++i) {
    Rat mid = (lo + hi) / Rat(2);
    if (mid * mid <= v)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Rat sqrt_upper(const Rat& v, int iters) {
  Rat lo(0), hi(1);
  for (int i = 0; i < iters; ++i) {
    Rat mid = (lo + hi) / Rat(2);
    if (mid * mid >= v)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Exactly-one-point test for <S1> n <S2>: nonempty plus per-coordinate min = max
// over the joint combo polytope. Returns the point when single.
std::optional<RatVector> single_intersection_point(const PointConfig& config, const IndexSet& s1,
                                                   const IndexSet& s2, bool disjoint) {
  if (disjoint && !pair_intersection_point(config, s1, s2).has_value()) return std::nullopt;
  int n = config.dim;
  int m1 = static_cast<int>(s1.size()), m2 = static_cast<int>(s2.size());
  LinearProgram lp;
  lp.num_vars = m1 + m2;
  lp.nonneg.assign(static_cast<size_t>(m1 + m2), 1);
  lp.objective.assign(static_cast<size_t>(m1 + m2), Rat());
  lp.a_eq.assign(static_cast<size_t>(n) + 2, RatVector(static_cast<size_t>(m1 + m2)));
  lp.b_eq.assign(static_cast<size_t>(n) + 2, Rat());
  for (int c = 0; c < n; ++c) {
    for (int j = 0; j < m1; ++j) lp.a_eq[static_cast<size_t>(c)][static_cast<size_t>(j)] = config[s1[static_cast<size_t>(j)]][static_cast<size_t>(c)];
    for (int j = 0; j < m2; ++j) lp.a_eq[static_cast<size_t>(c)][static_cast<size_t>(m1 + j)] = -config[s2[static_cast<size_t>(j)]][static_cast<size_t>(c)];
  }
  for (int j = 0; j < m1; ++j) lp.a_eq[static_cast<size_t>(n)][static_cast<size_t>(j)] = Rat(1);
  lp.b_eq[static_cast<size_t>(n)] = Rat(1);
  for (int j = 0; j < m2; ++j) lp.a_eq[static_cast<size_t>(n) + 1][static_cast<size_t>(m1 + j)] = Rat(1);
  lp.b_eq[static_cast<size_t>(n) + 1] = Rat(1);

  RatVector point(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    Rat extremes[2];
    for (int dir = 0; dir < 2; ++dir) {
      for (int j = 0; j < m1; ++j) {
        Rat v = config[s1[static_cast<size_t>(j)]][static_cast<size_t>(c)];
        lp.objective[static_cast<size_t>(j)] = dir == 0 ? v : -v;
      }
      LPOutcome out = solve(lp);
      require(out.status == LPStatus::optimal, ErrorKind::internal, "single_intersection_point: LP not optimal");
      extremes[dir] = dir == 0 ? *out.value : -*out.value;
    }
    if (extremes[0] != extremes[1]) return std::nullopt;
    point[static_cast<size_t>(c)] = extremes[0];
    for (int j = 0; j < m1; ++j) lp.objective[static_cast<size_t>(j)] = Rat();
  }
  return point;
}

} // namespace

std::vector<DeltaQualifyingPair> delta_qualifying_pairs(const PointConfig& base, int max_part_size) {
  int n = base.size();
  require(n >= 1 && n <= 30, ErrorKind::input, "delta_qualifying_pairs: unsupported size");
  struct Sub {
    uint32_t mask;
    IndexSet idx;
    detail::Box box;
  };
  std::vector<Sub> subs;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    int pc = __builtin_popcount(mask);
    if (pc < 2) continue;
    if (max_part_size > 0 && pc > max_part_size) continue;
    IndexSet idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    subs.push_back({mask, idx, detail::make_box(base, idx)});
  }

  std::vector<DeltaQualifyingPair> out;
  for (size_t i = 0; i < subs.size(); ++i) {
    for (size_t j = i + 1; j < subs.size(); ++j) {
      uint32_t overlap = subs[i].mask & subs[j].mask;
      if (__builtin_popcount(overlap) >= 2) continue; // intersection contains a segment
      if (!detail::boxes_meet(subs[i].box, subs[j].box)) continue;

      // positive angle requires trivially-intersecting direction spaces
      RatMatrix bu = direction_basis(base, subs[i].idx);
      RatMatrix bv = direction_basis(base, subs[j].idx);
      RatMatrix joint = bu;
      for (const auto& r : bv) joint.push_back(r);
      if (rank(joint) < static_cast<int>(bu.size() + bv.size())) continue;

      auto z = single_intersection_point(base, subs[i].idx, subs[j].idx, overlap == 0);
      if (!z) continue;

      // cos^2(angle) = largest eigenvalue of (M G_B^-1 M^T, G_A) with M = A^T B
      RatMatrix at = bu, bt = bv; // rows are basis vectors
      RatMatrix ga = mat_mul(at, mat_transpose(at));
      RatMatrix gb = mat_mul(bt, mat_transpose(bt));
      RatMatrix m = mat_mul(at, mat_transpose(bt));
      RatMatrix c = mat_mul(mat_mul(m, mat_inverse(gb)), mat_transpose(m));
      RatMatrix x = mat_mul(mat_inverse(ga), c);
      auto [lo, hi] = enclose_largest_root(char_poly(x), 80);
      int deepen = 0;
      while (hi == Rat(1) && lo != hi) {
        require(++deepen <= 4, ErrorKind::internal, "delta_qualifying_pairs: cos^2 enclosure stuck at 1");
        std::tie(lo, hi) = enclose_largest_root(char_poly(x), 80 + 60 * deepen);
      }
      out.push_back({subs[i].idx, subs[j].idx, std::move(*z), lo, hi});
    }
  }
  return out;
}

Rat compute_delta_bound(const PointConfig& base, const Rat& epsilon, int max_part_size) {
  require(epsilon.sgn() > 0, ErrorKind::precondition, "compute_delta_bound: epsilon must be positive");
  auto pairs = delta_qualifying_pairs(base, max_part_size);
  if (pairs.empty()) return epsilon / Rat(2);

  Rat lam_lo, lam_hi;
  for (const auto& p : pairs) {
    if (p.cos2_lo > lam_lo) lam_lo = p.cos2_lo;
    if (p.cos2_hi > lam_hi) lam_hi = p.cos2_hi;
  }
  require(lam_hi < Rat(1), ErrorKind::internal, "compute_delta_bound: unseparated cos^2 = 1");

  const int iters = 64;
  Rat s_hi = sqrt_upper(lam_hi, iters);      // cos(alpha) <= s_hi
  Rat t_lo = (Rat(1) - s_hi) / Rat(2);       // sin^2(alpha/2) >= t_lo
  require(t_lo.sgn() > 0, ErrorKind::internal, "compute_delta_bound: vanished sin bound");
  Rat r = sqrt_lower(t_lo, iters);           // r <= sin(alpha/2)
  Rat delta = epsilon * r;

  // certify delta >= (1 - 2^-10) * epsilon * sin(alpha/2)
  Rat s_lo = sqrt_lower(lam_lo, iters);      // cos(alpha) >= s_lo
  Rat factor(1023, 1024);
  require(r * r >= factor * factor * (Rat(1) - s_lo) / Rat(2), ErrorKind::internal,
          "compute_delta_bound: lost more than the allowed factor");
  require(delta.sgn() > 0 && delta < epsilon, ErrorKind::internal, "compute_delta_bound: delta out of range");
  return delta;
}

} // namespace tvk
