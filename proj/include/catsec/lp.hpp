#ifndef CATSEC_LP_HPP
#define CATSEC_LP_HPP

// Self-contained dense linear programming: standard form
//     minimize c.x  subject to  A x = b,  x >= 0
// solved by two-phase simplex. The objective row is carried in the tableau;
// entering variables follow Dantzig's rule with a permanent switch to
// Bland's anti-cycling rule when the objective stalls. Redundant equality
// rows are pruned by Gaussian elimination before phase 1.
//
// min_tv_fit encodes "find the stochastic simulator minimizing the channel
// total-variation distance to a target" as one such LP, with per-entry
// absolute-value splits and a single epigraph variable bounding every
// input column's L1 term. Rows with an obvious basic variable are hinted
// so phase 1 only has to repair the simplex-constraint rows.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finstoch.hpp"

namespace catsec {

struct LpProblem {
  std::vector<double> c;
  std::vector<std::vector<double>> eq_a;
  std::vector<double> eq_b;
  std::vector<std::string> names;  // optional, diagnostics only

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return eq_b.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
};

struct SolveOptions {
  // basis_hint[r] names a column whose coefficient in row r is +-1 and which
  // appears in no other hinted row; npos = no hint. Hinted problems skip
  // row pruning (the caller vouches for row independence).
  std::vector<std::size_t> basis_hint;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

namespace detail {

// Row-reduce (A|b); drops dependent rows, returns false on an inconsistent
// system (a row 0 = nonzero).
inline bool prune_rows(std::vector<std::vector<double>>& a, std::vector<double>& b,
                       double pivot_tol = 1e-10) {
  const std::size_t m = b.size();
  const std::size_t n = m ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= pivot_tol) continue;
    std::swap(a[piv], a[rank]);
    std::swap(b[piv], b[rank]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank) continue;
      double f = a[r][col] / a[rank][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[rank][k];
      a[r][col] = 0.0;
      b[r] -= f * b[rank];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < m; ++r)
    if (std::abs(b[r]) > 1e-8) return false;
  a.resize(rank);
  b.resize(rank);
  return true;
}

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, std::vector<double> b,
          std::size_t n_struct, const std::vector<std::size_t>& hint)
      : m_(b.size()), n_(n_struct), b_(std::move(b)) {
    basis_.assign(m_, SolveOptions::npos);
    std::vector<bool> hinted(m_, false);
    n_art_ = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r < hint.size() && hint[r] != SolveOptions::npos)
        hinted[r] = true;
      else
        ++n_art_;
    }
    width_ = n_ + n_art_;
    a_.assign(m_ * width_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = a[r][j];

    // Install hinted basics: normalize their rows and clear their columns.
    for (std::size_t r = 0; r < m_; ++r) {
      if (!hinted[r]) continue;
      std::size_t col = hint[r];
      double piv = at(r, col);
      if (std::abs(piv) < 1e-9)
        throw std::logic_error("lp: basis hint names a zero coefficient");
      scale_row(r, 1.0 / piv);
      for (std::size_t r2 = 0; r2 < m_; ++r2)
        if (r2 != r && at(r2, col) != 0.0) add_row(r2, r, -at(r2, col));
      basis_[r] = col;
    }
    // A hinted row driven negative would make the start infeasible; demote
    // it to an artificial row. (Does not occur for min_tv_fit's encoding.)
    for (std::size_t r = 0; r < m_; ++r)
      if (hinted[r] && b_[r] < -1e-12) {
        basis_[r] = SolveOptions::npos;
        ++n_art_;
        ++width_;
        // Re-lay the tableau with one more artificial column.
        std::vector<double> wide(m_ * width_, 0.0);
        for (std::size_t rr = 0; rr < m_; ++rr)
          for (std::size_t j = 0; j < width_ - 1; ++j)
            wide[rr * width_ + j] = a_[rr * (width_ - 1) + j];
        a_ = std::move(wide);
      }
    // Attach artificials.
    std::size_t next = n_;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] != SolveOptions::npos) continue;
      if (b_[r] < 0) scale_row(r, -1.0);
      at(r, next) = 1.0;
      basis_[r] = next;
      ++next;
    }
  }

  bool phase1() {
    if (n_art_ == 0) return true;
    std::vector<double> cost(width_, 0.0);
    for (std::size_t j = n_; j < width_; ++j) cost[j] = 1.0;
    double obj = run(cost, width_);
    if (obj > 1e-7) return false;
    // Remove artificials from the basis (pivot out or drop the row).
    for (std::size_t r = 0; r < m_;) {
      if (basis_[r] < n_) {
        ++r;
        continue;
      }
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(r, j)) > 1e-9) {
          enter = j;
          break;
        }
      if (enter == n_) {
        drop_row(r);
      } else {
        pivot(r, enter);
        ++r;
      }
    }
    return true;
  }

  bool phase2(std::vector<double> c, double& obj) {
    c.resize(width_, 0.0);
    bool unbounded = false;
    obj = run(c, n_, &unbounded);
    return !unbounded;
  }

  std::vector<double> extract(std::size_t n_struct) const {
    std::vector<double> x(n_struct, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_struct) x[basis_[r]] = b_[r];
    return x;
  }

 private:
  double& at(std::size_t r, std::size_t j) { return a_[r * width_ + j]; }
  double at(std::size_t r, std::size_t j) const { return a_[r * width_ + j]; }

  void scale_row(std::size_t r, double f) {
    double* row = &a_[r * width_];
    for (std::size_t j = 0; j < width_; ++j) row[j] *= f;
    b_[r] *= f;
  }

  void add_row(std::size_t dst, std::size_t src, double f) {
    double* d = &a_[dst * width_];
    const double* s = &a_[src * width_];
    for (std::size_t j = 0; j < width_; ++j) d[j] += f * s[j];
    b_[dst] += f * b_[src];
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * width_),
             a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  void pivot(std::size_t row, std::size_t col) {
    scale_row(row, 1.0 / at(row, col));
    for (std::size_t r = 0; r < m_; ++r)
      if (r != row && at(r, col) != 0.0) add_row(r, row, -at(r, col));
    double f = z_[col];
    if (f != 0.0) {
      const double* s = &a_[row * width_];
      for (std::size_t j = 0; j < width_; ++j) z_[j] -= f * s[j];
      zval_ -= f * b_[row];
    }
    basis_[row] = col;
  }

  // Simplex over columns [0, active). Returns the objective value.
  double run(const std::vector<double>& cost, std::size_t active, bool* unbounded = nullptr) {
    if (unbounded) *unbounded = false;
    // Objective row: z_[j] = reduced cost of column j; zval_ = -objective.
    z_.assign(width_, 0.0);
    zval_ = 0.0;
    for (std::size_t j = 0; j < width_; ++j) z_[j] = cost[j];
    for (std::size_t r = 0; r < m_; ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* s = &a_[r * width_];
      for (std::size_t j = 0; j < width_; ++j) z_[j] -= cb * s[j];
      zval_ -= cb * b_[r];
    }

    bool bland = false;
    std::size_t stall = 0;
    double last = -zval_;
    const std::size_t stall_limit = 4 * m_ + 64;
    for (;;) {
      std::size_t enter = active;
      if (!bland) {
        double best = -1e-9;
        for (std::size_t j = 0; j < active; ++j)
          if (z_[j] < best) {
            best = z_[j];
            enter = j;
          }
      } else {
        for (std::size_t j = 0; j < active; ++j)
          if (z_[j] < -1e-9) {
            enter = j;
            break;
          }
      }
      if (enter == active) break;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        double arj = at(r, enter);
        if (arj > 1e-9) {
          double ratio = b_[r] / arj;
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave == m_ || basis_[r] < basis_[leave]))) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == m_) {
        if (unbounded) *unbounded = true;
        return -std::numeric_limits<double>::infinity();
      }
      pivot(leave, enter);

      double cur = -zval_;
      if (cur < last - 1e-12) {
        last = cur;
        stall = 0;
      } else if (!bland && ++stall > stall_limit) {
        bland = true;  // degeneracy: switch to Bland's rule for termination
      }
    }
    return -zval_;
  }

  std::size_t m_, n_, n_art_ = 0, width_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> z_;
  double zval_ = 0.0;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution solve(const LpProblem& p, const SolveOptions& opts = {}) {
  for (const auto& row : p.eq_a)
    if (row.size() != p.num_vars())
      throw std::invalid_argument("lp: constraint row width does not match variable count");
  if (p.eq_a.size() != p.eq_b.size())
    throw std::invalid_argument("lp: constraint matrix and rhs disagree");

  LpSolution sol;
  const bool hinted = !opts.basis_hint.empty();
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<std::size_t> hint = opts.basis_hint;
  if (!hinted) {
    a = p.eq_a;
    b = p.eq_b;
    if (!detail::prune_rows(a, b)) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    hint.assign(b.size(), SolveOptions::npos);
  }
  const auto& ra = hinted ? p.eq_a : a;
  auto rb = hinted ? p.eq_b : b;
  hint.resize(rb.size(), SolveOptions::npos);

  detail::Tableau t(ra, std::move(rb), p.num_vars(), hint);
  if (!t.phase1()) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  double obj = 0.0;
  if (!t.phase2(p.c, obj)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.x = t.extract(p.num_vars());
  sol.objective_value = obj;
  return sol;
}

// The induced view as a function of the simulator; must be linear (at most
// affine) in the simulator's entries.
using MapBuilder = std::function<Morphism(const Morphism&)>;

struct TvFitResult {
  Morphism simulator;
  double residual = 0.0;
};

// Extra equality constraints over the simulator entries (row-major order):
// coeffs . b = rhs.
struct LinearEq {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

inline TvFitResult min_tv_fit(const MapBuilder& map_builder, const Morphism& target,
                              const WireList& sim_dom, const WireList& sim_cod,
                              const std::vector<LinearEq>& extra_eqs = {}) {
  const std::size_t sd = sim_dom.total_size();
  const std::size_t sc = sim_cod.total_size();
  const std::size_t nb = sc * sd;

  auto probe = [&](std::size_t k) {
    Morphism e;
    e.dom = sim_dom;
    e.cod = sim_cod;
    e.flavor = Flavor::nonneg;
    e.matrix.assign(nb, 0.0);
    if (k < nb) e.matrix[k] = 1.0;
    Morphism v = map_builder(e);
    if (!(v.dom == target.dom) || !(v.cod == target.cod))
      throw shape_error("min_tv_fit: builder output shape does not match target");
    return v;
  };

  Morphism s0 = probe(nb);  // zero simulator: the affine offset
  std::vector<Morphism> basis;
  basis.reserve(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    Morphism v = probe(k);
    for (std::size_t i = 0; i < v.matrix.size(); ++i) v.matrix[i] -= s0.matrix[i];
    basis.push_back(std::move(v));
  }

  // Keep only view entries that can ever be nonzero on either side.
  const std::size_t vrows = target.rows(), vcols = target.cols();
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (std::size_t r = 0; r < vrows; ++r)
    for (std::size_t cc = 0; cc < vcols; ++cc) {
      bool live = std::abs(target.at(r, cc)) > 0 || std::abs(s0.at(r, cc)) > 0;
      for (std::size_t k = 0; k < nb && !live; ++k) live = std::abs(basis[k].at(r, cc)) > 0;
      if (live) kept.emplace_back(r, cc);
    }
  const std::size_t ne = kept.size();

  // Variables: [b(nb), p(ne), q(ne), s(vcols), t].
  const std::size_t vp = nb, vq = nb + ne, vs = nb + 2 * ne, vt = vs + vcols;
  const std::size_t nvars = vt + 1;
  LpProblem lp;
  SolveOptions opts;
  lp.c.assign(nvars, 0.0);
  lp.c[vt] = 1.0;

  // Entry rows: sum_k M_k[e] b_k - p_e + q_e = target[e] - s0[e].
  // Whichever of p_e/q_e matches the sign of the rhs is hinted basic.
  for (std::size_t e = 0; e < ne; ++e) {
    auto [r, cc] = kept[e];
    std::vector<double> row(nvars, 0.0);
    for (std::size_t k = 0; k < nb; ++k) row[k] = basis[k].at(r, cc);
    row[vp + e] = -1.0;
    row[vq + e] = 1.0;
    lp.eq_a.push_back(std::move(row));
    double rhs = target.at(r, cc) - s0.at(r, cc);
    lp.eq_b.push_back(rhs);
    opts.basis_hint.push_back(rhs >= 0 ? vq + e : vp + e);
  }
  // Column rows: sum_{e in col} (p_e + q_e) + s_col - 2 t = 0.
  for (std::size_t cc = 0; cc < vcols; ++cc) {
    std::vector<double> row(nvars, 0.0);
    for (std::size_t e = 0; e < ne; ++e)
      if (kept[e].second == cc) {
        row[vp + e] = 1.0;
        row[vq + e] = 1.0;
      }
    row[vs + cc] = 1.0;
    row[vt] = -2.0;
    lp.eq_a.push_back(std::move(row));
    lp.eq_b.push_back(0.0);
    opts.basis_hint.push_back(SolveOptions::npos);
  }
  // Simulator columns are stochastic.
  for (std::size_t j = 0; j < sd; ++j) {
    std::vector<double> row(nvars, 0.0);
    for (std::size_t i = 0; i < sc; ++i) row[i * sd + j] = 1.0;
    lp.eq_a.push_back(std::move(row));
    lp.eq_b.push_back(1.0);
    opts.basis_hint.push_back(SolveOptions::npos);
  }
  // Caller-supplied equalities over the simulator entries.
  for (const auto& eq : extra_eqs) {
    if (eq.coeffs.size() != nb)
      throw std::invalid_argument("min_tv_fit: extra equality has the wrong width");
    std::vector<double> row(nvars, 0.0);
    for (std::size_t k = 0; k < nb; ++k) row[k] = eq.coeffs[k];
    lp.eq_a.push_back(std::move(row));
    lp.eq_b.push_back(eq.rhs);
    opts.basis_hint.push_back(SolveOptions::npos);
  }

  LpSolution sol = solve(lp, opts);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("min_tv_fit: LP not optimal (status " +
                             std::to_string(static_cast<int>(sol.status)) + ")");

  TvFitResult res;
  res.residual = std::max(0.0, sol.objective_value);
  Morphism sim;
  sim.dom = sim_dom;
  sim.cod = sim_cod;
  sim.matrix.assign(nb, 0.0);
  for (std::size_t k = 0; k < nb; ++k) sim.matrix[k] = std::max(0.0, sol.x[k]);
  // Exact renormalization to absorb simplex round-off.
  for (std::size_t j = 0; j < sd; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < sc; ++i) s += sim.matrix[i * sd + j];
    if (s <= 0) {
      for (std::size_t i = 0; i < sc; ++i) sim.matrix[i * sd + j] = 1.0 / sc;
    } else {
      for (std::size_t i = 0; i < sc; ++i) sim.matrix[i * sd + j] /= s;
    }
  }
  sim.validate();
  res.simulator = std::move(sim);
  return res;
}

}  // namespace catsec

#endif  // CATSEC_LP_HPP
