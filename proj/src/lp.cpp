#include "tvk/lp.hpp"

#include <algorithm>

namespace tvk {

void LinearProgram::validate() const {
  require(num_vars >= 1, ErrorKind::input, "LinearProgram: num_vars must be positive");
  require(static_cast<int>(objective.size()) == num_vars, ErrorKind::input, "LinearProgram: objective size");
  require(static_cast<int>(nonneg.size()) == num_vars, ErrorKind::input, "LinearProgram: nonneg mask size");
  require(a_eq.size() == b_eq.size(), ErrorKind::input, "LinearProgram: eq row count");
  require(a_le.size() == b_le.size(), ErrorKind::input, "LinearProgram: le row count");
  for (const auto& r : a_eq)
    require(static_cast<int>(r.size()) == num_vars, ErrorKind::input, "LinearProgram: eq row size");
  for (const auto& r : a_le)
    require(static_cast<int>(r.size()) == num_vars, ErrorKind::input, "LinearProgram: le row size");
}

namespace {

// Standard form: rows [eq; le] with slacks, all variables nonnegative (free
// variables split into +/- parts), b >= 0 after row sign flips.
struct Standard {
  int m = 0;
  int ncols = 0; // structural + slack (artificials are appended by the tableau)
  RatMatrix a;
  RatVector b;
  std::vector<int> row_sign; // +1 / -1 flip applied per row
  std::vector<int> col_pos;  // per original variable
  std::vector<int> col_neg;  // -1 when the variable is nonnegative
};

Standard build_standard(const LinearProgram& lp) {
  Standard s;
  int m_eq = static_cast<int>(lp.a_eq.size());
  int m_le = static_cast<int>(lp.a_le.size());
  s.m = m_eq + m_le;
  s.col_pos.resize(static_cast<size_t>(lp.num_vars));
  s.col_neg.assign(static_cast<size_t>(lp.num_vars), -1);
  int c = 0;
  for (int j = 0; j < lp.num_vars; ++j) s.col_pos[static_cast<size_t>(j)] = c++;
  for (int j = 0; j < lp.num_vars; ++j)
    if (!lp.nonneg[static_cast<size_t>(j)]) s.col_neg[static_cast<size_t>(j)] = c++;
  int slack_begin = c;
  s.ncols = c + m_le;

  s.a.assign(static_cast<size_t>(s.m), RatVector(static_cast<size_t>(s.ncols)));
  s.b.resize(static_cast<size_t>(s.m));
  s.row_sign.assign(static_cast<size_t>(s.m), 1);

  auto fill_row = [&](int row, const RatVector& coeffs, const Rat& rhs) {
    for (int j = 0; j < lp.num_vars; ++j) {
      const Rat& v = coeffs[static_cast<size_t>(j)];
      if (v.is_zero()) continue;
      s.a[row][static_cast<size_t>(s.col_pos[static_cast<size_t>(j)])] = v;
      if (s.col_neg[static_cast<size_t>(j)] >= 0)
        s.a[row][static_cast<size_t>(s.col_neg[static_cast<size_t>(j)])] = -v;
    }
    s.b[static_cast<size_t>(row)] = rhs;
  };

  for (int i = 0; i < m_eq; ++i) fill_row(i, lp.a_eq[static_cast<size_t>(i)], lp.b_eq[static_cast<size_t>(i)]);
  for (int i = 0; i < m_le; ++i) {
    fill_row(m_eq + i, lp.a_le[static_cast<size_t>(i)], lp.b_le[static_cast<size_t>(i)]);
    s.a[static_cast<size_t>(m_eq + i)][static_cast<size_t>(slack_begin + i)] = Rat(1);
  }
  for (int i = 0; i < s.m; ++i) {
    if (s.b[static_cast<size_t>(i)].sgn() < 0) {
      s.row_sign[static_cast<size_t>(i)] = -1;
      for (auto& v : s.a[static_cast<size_t>(i)]) v = -v;
      s.b[static_cast<size_t>(i)] = -s.b[static_cast<size_t>(i)];
    }
  }
  return s;
}

class Tableau {
public:
  Tableau(const Standard& s) : m_(s.m), n_(s.ncols), art_begin_(s.ncols) {
    total_ = n_ + m_;
    rhs_ = total_;
    t_.assign(static_cast<size_t>(m_), RatVector(static_cast<size_t>(total_ + 1)));
    basis_.resize(static_cast<size_t>(m_));
    dead_.assign(static_cast<size_t>(m_), 0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) t_[i][static_cast<size_t>(j)] = s.a[i][static_cast<size_t>(j)];
      t_[i][static_cast<size_t>(art_begin_ + i)] = Rat(1);
      t_[i][static_cast<size_t>(rhs_)] = s.b[static_cast<size_t>(i)];
      basis_[static_cast<size_t>(i)] = art_begin_ + i;
    }
    cost_.assign(static_cast<size_t>(total_ + 1), Rat());
  }

  // Installs raw costs and re-canonicalizes against the current basis. The last
  // cost entry tracks the negated objective value.
  void set_costs(const RatVector& raw) {
    for (int j = 0; j <= total_; ++j) cost_[static_cast<size_t>(j)] = j < static_cast<int>(raw.size()) ? raw[static_cast<size_t>(j)] : Rat();
    cost_[static_cast<size_t>(rhs_)] = Rat();
    for (int i = 0; i < m_; ++i) {
      if (dead_[static_cast<size_t>(i)]) continue;
      const Rat cb = cost_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
      if (cb.is_zero()) continue;
      for (int j = 0; j <= total_; ++j)
        if (!t_[i][static_cast<size_t>(j)].is_zero()) cost_[static_cast<size_t>(j)] -= cb * t_[i][static_cast<size_t>(j)];
    }
  }

  // Bland: entering = smallest column index with negative reduced cost (below
  // col_limit), leaving = min-ratio row breaking ties by smallest basic index.
  // Returns false on unboundedness.
  bool iterate(int col_limit) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < col_limit; ++j) {
        if (cost_[static_cast<size_t>(j)].sgn() < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (dead_[static_cast<size_t>(i)]) continue;
        const Rat& a = t_[i][static_cast<size_t>(enter)];
        if (a.sgn() <= 0) continue;
        Rat ratio = t_[i][static_cast<size_t>(rhs_)] / a;
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    RatVector& pr = t_[static_cast<size_t>(row)];
    const Rat p = pr[static_cast<size_t>(col)];
    for (auto& v : pr) v /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row || dead_[static_cast<size_t>(i)]) continue;
      const Rat f = t_[i][static_cast<size_t>(col)];
      if (f.is_zero()) continue;
      RatVector& ri = t_[static_cast<size_t>(i)];
      for (int j = 0; j <= total_; ++j)
        if (!pr[static_cast<size_t>(j)].is_zero()) ri[static_cast<size_t>(j)] -= f * pr[static_cast<size_t>(j)];
    }
    const Rat fc = cost_[static_cast<size_t>(col)];
    if (!fc.is_zero())
      for (int j = 0; j <= total_; ++j)
        if (!pr[static_cast<size_t>(j)].is_zero()) cost_[static_cast<size_t>(j)] -= fc * pr[static_cast<size_t>(j)];
    basis_[static_cast<size_t>(row)] = col;
  }

  // After a zero-value phase 1: pivot basic artificials out or mark their rows
  // redundant so phase 2 never touches artificial columns.
  void eliminate_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (dead_[static_cast<size_t>(i)] || basis_[static_cast<size_t>(i)] < art_begin_) continue;
      int col = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (!t_[i][static_cast<size_t>(j)].is_zero()) {
          col = j;
          break;
        }
      }
      if (col >= 0)
        pivot(i, col);
      else
        dead_[static_cast<size_t>(i)] = 1;
    }
  }

  Rat objective_value() const { return -cost_[static_cast<size_t>(rhs_)]; }
  Rat reduced_cost(int col) const { return cost_[static_cast<size_t>(col)]; }
  int art_begin() const { return art_begin_; }
  int total_cols() const { return total_; }

  RatVector basic_solution(int ncols) const {
    RatVector x(static_cast<size_t>(ncols));
    for (int i = 0; i < m_; ++i) {
      if (dead_[static_cast<size_t>(i)]) continue;
      int b = basis_[static_cast<size_t>(i)];
      if (b < ncols) x[static_cast<size_t>(b)] = t_[i][static_cast<size_t>(rhs_)];
    }
    return x;
  }

private:
  int m_, n_, art_begin_, total_, rhs_;
  RatMatrix t_;
  RatVector cost_;
  std::vector<int> basis_;
  std::vector<uint8_t> dead_;
};

} // namespace

LPOutcome solve(const LinearProgram& lp) {
  lp.validate();
  Standard s = build_standard(lp);
  Tableau tab(s);

  // Phase 1: minimize the artificial sum.
  RatVector phase1(static_cast<size_t>(tab.total_cols()));
  for (int j = tab.art_begin(); j < tab.total_cols(); ++j) phase1[static_cast<size_t>(j)] = Rat(1);
  tab.set_costs(phase1);
  bool ok = tab.iterate(tab.total_cols());
  require(ok, ErrorKind::internal, "lp: phase 1 unbounded"); // impossible: objective >= 0
  if (tab.objective_value().sgn() > 0) {
    // Infeasible: phase-1 multipliers give the Farkas certificate. The reduced
    // cost of artificial i is 1 - y_i, so the combined-row multiplier is
    // row_sign * (reduced_cost - 1).
    int m_eq = static_cast<int>(lp.a_eq.size());
    RatVector cert(static_cast<size_t>(s.m));
    for (int i = 0; i < s.m; ++i) {
      Rat yhat = tab.reduced_cost(tab.art_begin() + i) - Rat(1);
      cert[static_cast<size_t>(i)] = Rat(s.row_sign[static_cast<size_t>(i)]) * yhat;
    }
    LPOutcome out;
    out.status = LPStatus::infeasible;
    out.farkas = std::move(cert);
    (void)m_eq;
    return out;
  }

  tab.eliminate_artificials();

  // Phase 2: original objective over structural columns.
  RatVector phase2(static_cast<size_t>(tab.total_cols()));
  for (int j = 0; j < lp.num_vars; ++j) {
    phase2[static_cast<size_t>(s.col_pos[static_cast<size_t>(j)])] = lp.objective[static_cast<size_t>(j)];
    if (s.col_neg[static_cast<size_t>(j)] >= 0)
      phase2[static_cast<size_t>(s.col_neg[static_cast<size_t>(j)])] = -lp.objective[static_cast<size_t>(j)];
  }
  tab.set_costs(phase2);
  if (!tab.iterate(tab.art_begin())) return {LPStatus::unbounded, std::nullopt, std::nullopt, std::nullopt};

  RatVector xs = tab.basic_solution(s.ncols);
  RatVector x(static_cast<size_t>(lp.num_vars));
  for (int j = 0; j < lp.num_vars; ++j) {
    x[static_cast<size_t>(j)] = xs[static_cast<size_t>(s.col_pos[static_cast<size_t>(j)])];
    if (s.col_neg[static_cast<size_t>(j)] >= 0)
      x[static_cast<size_t>(j)] -= xs[static_cast<size_t>(s.col_neg[static_cast<size_t>(j)])];
  }
  LPOutcome out;
  out.status = LPStatus::optimal;
  out.value = dot(lp.objective, x);
  out.solution = std::move(x);
  return out;
}

bool verify_outcome(const LinearProgram& lp, const LPOutcome& out) {
  lp.validate();
  switch (out.status) {
    case LPStatus::optimal: {
      if (!out.solution || !out.value) return false;
      const RatVector& x = *out.solution;
      if (static_cast<int>(x.size()) != lp.num_vars) return false;
      for (int j = 0; j < lp.num_vars; ++j)
        if (lp.nonneg[static_cast<size_t>(j)] && x[static_cast<size_t>(j)].sgn() < 0) return false;
      for (size_t i = 0; i < lp.a_eq.size(); ++i)
        if (dot(lp.a_eq[i], x) != lp.b_eq[i]) return false;
      for (size_t i = 0; i < lp.a_le.size(); ++i)
        if (dot(lp.a_le[i], x) > lp.b_le[i]) return false;
      return dot(lp.objective, x) == *out.value;
    }
    case LPStatus::infeasible: {
      if (!out.farkas) return false;
      const RatVector& y = *out.farkas;
      size_t m_eq = lp.a_eq.size(), m_le = lp.a_le.size();
      if (y.size() != m_eq + m_le) return false;
      for (size_t i = 0; i < m_le; ++i)
        if (y[m_eq + i].sgn() < 0) return false;
      Rat rhs;
      for (size_t i = 0; i < m_eq; ++i) rhs += y[i] * lp.b_eq[i];
      for (size_t i = 0; i < m_le; ++i) rhs += y[m_eq + i] * lp.b_le[i];
      if (rhs.sgn() >= 0) return false;
      for (int j = 0; j < lp.num_vars; ++j) {
        Rat g;
        for (size_t i = 0; i < m_eq; ++i) g += y[i] * lp.a_eq[i][static_cast<size_t>(j)];
        for (size_t i = 0; i < m_le; ++i) g += y[m_eq + i] * lp.a_le[i][static_cast<size_t>(j)];
        if (lp.nonneg[static_cast<size_t>(j)]) {
          if (g.sgn() < 0) return false;
        } else {
          if (!g.is_zero()) return false;
        }
      }
      return true;
    }
    case LPStatus::unbounded:
      return !out.solution && !out.value && !out.farkas;
  }
  return false;
}

} // namespace tvk
