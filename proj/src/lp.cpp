#include "tpgm/lp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "tpgm/error.hpp"

namespace tpgm {

void LinearProgram::validate() const {
  if (a.cols() != c.size())
    fail(ErrorKind::dimension, "LP: A has " + std::to_string(a.cols()) + " columns for " +
                                   std::to_string(c.size()) + " variables");
  if (a.rows() != b.size())
    fail(ErrorKind::dimension, "LP: A has " + std::to_string(a.rows()) + " rows for " +
                                   std::to_string(b.size()) + " right-hand sides");
  for (double v : c)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "LP: non-finite objective coefficient");
  for (double v : b)
    if (!std::isfinite(v) || v < 0.0)
      fail(ErrorKind::invalid_argument, "LP: right-hand sides must be finite and >= 0");
}

std::string_view to_string(LpStatus s) {
  return s == LpStatus::optimal ? "optimal" : "iteration_limit";
}

double max_violation(const LinearProgram& lp, const std::vector<double>& z) {
  double worst = 0.0;
  const auto az = spmv(lp.a, z);
  for (std::size_t r = 0; r < az.size(); ++r) worst = std::max(worst, az[r] - lp.b[r]);
  for (double v : z) worst = std::max({worst, -v, v - 1.0});
  return worst;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kHarrisTol = 1e-9;
constexpr double kPrimalTol = 1e-9;
constexpr double kDevexReset = 1e6;
constexpr std::size_t kRefactorInterval = 100;
constexpr double kDropTol = 1e-14;
constexpr double kCostPerturbation = 1e-5;

// Sparse LU factors of a basis B0 and the eta file of the column
// replacements made since, so that B^-1 = E_k ... E_1 B0^-1.
class BasisFactor {
 public:
  explicit BasisFactor(std::size_t m) : m_(m), tmp_(static_cast<Eigen::Index>(m)) {}

  void factor(const std::vector<Eigen::Triplet<double>>& entries) {
    eta_row_.clear();
    eta_pivot_.clear();
    eta_start_.assign(1, 0);
    eta_idx_.clear();
    eta_val_.clear();
    if (m_ == 0) return;
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::SparseMatrix<double> b(m, m);
    b.setFromTriplets(entries.begin(), entries.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    if (lu_.info() != Eigen::Success) fail(ErrorKind::internal, "LP: singular basis at reinversion");
  }

  // x <- B^-1 x
  void ftran(Eigen::VectorXd& x) {
    if (m_ == 0) return;
    tmp_ = lu_.solve(x);
    x.swap(tmp_);
    for (std::size_t k = 0; k < eta_row_.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(eta_row_[k]);
      const double xr = x[r] / eta_pivot_[k];
      x[r] = xr;
      if (xr == 0.0) continue;
      for (std::size_t e = eta_start_[k]; e < eta_start_[k + 1]; ++e)
        x[static_cast<Eigen::Index>(eta_idx_[e])] -= eta_val_[e] * xr;
    }
  }

  // y <- B^-T y
  void btran(Eigen::VectorXd& y) {
    for (std::size_t k = eta_row_.size(); k-- > 0;) {
      const auto r = static_cast<Eigen::Index>(eta_row_[k]);
      double acc = y[r];
      for (std::size_t e = eta_start_[k]; e < eta_start_[k + 1]; ++e)
        acc -= eta_val_[e] * y[static_cast<Eigen::Index>(eta_idx_[e])];
      y[r] = acc / eta_pivot_[k];
    }
    if (m_ == 0) return;
    tmp_ = lu_.transpose().solve(y);
    y.swap(tmp_);
  }

  // Position r of the basis now holds the column whose ftran is alpha.
  void update(std::size_t r, const std::vector<double>& alpha) {
    eta_row_.push_back(r);
    eta_pivot_.push_back(alpha[r]);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      eta_idx_.push_back(i);
      eta_val_.push_back(alpha[i]);
    }
    eta_start_.push_back(eta_idx_.size());
  }

 private:
  std::size_t m_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::VectorXd tmp_;
  std::vector<std::size_t> eta_row_;
  std::vector<double> eta_pivot_;
  std::vector<std::size_t> eta_start_{0};
  std::vector<std::size_t> eta_idx_;
  std::vector<double> eta_val_;
};

// Variables 0..n-1 are structural with bounds [0, ub_j]; n..n+m-1 are the
// row slacks with bounds [0, inf). The basis is held as a sparse LU
// factorization with product-form updates, refactored periodically.
//
// Boxed columns make any basis dual feasible once each nonbasic column sits
// at the bound matching the sign of its reduced cost, so the solve starts
// with a dual simplex from the slack basis (bound-flipping ratio test, dual
// steepest-edge row choice) on slightly perturbed costs. A primal pass on the
// true costs then mops up the remaining dual infeasibilities and confirms
// optimality.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, std::vector<double> ub, const LpOptions& opts)
      : lp_(lp),
        ub_(std::move(ub)),
        opts_(opts),
        n_(lp.nvars()),
        m_(lp.nrows()),
        cols_(lp.a.transposed()),
        basis_(m_),
        work_(static_cast<Eigen::Index>(m_)),
        rho_(static_cast<Eigen::Index>(m_)),
        tau_(static_cast<Eigen::Index>(m_)),
        head_(m_),
        pos_(n_ + m_, kNone),
        upper_(n_ + m_, 0),
        xb_(m_, 0.0),
        alpha_(m_, 0.0),
        norm_(m_, 1.0),
        d_(n_ + m_, 0.0),
        weight_(n_ + m_, 1.0),
        prow_(n_ + m_, 0.0),
        in_row_(n_ + m_, 0) {
    for (std::size_t r = 0; r < m_; ++r) {
      head_[r] = n_ + r;
      pos_[n_ + r] = r;
    }
    for (std::size_t j = 0; j < n_; ++j) upper_[j] = lp_.c[j] > 0.0 ? 1 : 0;
    budget_ = opts_.max_pivots ? opts_.max_pivots : 50 * (n_ + m_);
  }

  LpSolution run() {
    LpSolution sol;
    perturb_costs();
    reinvert();
    if (dual_phase(sol)) {
      cost_ = lp_.c;
      reinvert();
      primal_phase(sol);
    }
    sol.z.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = pos_[j] != kNone ? xb_[pos_[j]] : (upper_[j] ? ub_[j] : 0.0);
      sol.z[j] = std::clamp(v, 0.0, ub_[j]);
    }
    return sol;
  }

 private:
  struct Candidate {
    std::size_t j;
    double ratio;
    double mag;
  };

  double cost(std::size_t j) const { return j < n_ ? cost_[j] : 0.0; }
  double upper_bound(std::size_t j) const { return j < n_ ? ub_[j] : kInf; }

  // Ties in the reduced costs stall the dual simplex, so it runs on costs
  // nudged away from zero by a small deterministic amount per column.
  void perturb_costs() {
    cost_ = lp_.c;
    double scale = 0.0;
    for (double v : lp_.c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return;
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t j = 0; j < n_; ++j) {
      h ^= h >> 31;
      h *= 0xbf58476d1ce4e5b9ULL;
      h += 0x94d049bb133111ebULL;
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      const double eps = kCostPerturbation * (1.0 + u) * (0.1 * scale + std::abs(lp_.c[j]));
      cost_[j] += upper_[j] ? eps : -eps;
    }
  }

  bool out_of_budget(LpSolution& sol) const {
    if (sol.pivots + sol.bound_flips < budget_) return false;
    sol.status = LpStatus::iteration_limit;
    return true;
  }

  // Returns false when the pivot budget ran out.
  bool dual_phase(LpSolution& sol) {
    std::size_t since_refactor = 0;
    for (;;) {
      if (out_of_budget(sol)) return false;
      if (since_refactor >= refactor_interval_) {
        reinvert();
        since_refactor = 0;
      }
      const std::size_t r = choose_row();
      if (r == kNone) {
        if (since_refactor == 0) return true;
        reinvert();
        since_refactor = 0;
        continue;
      }
      dual_iteration(r, sol);
      ++since_refactor;
    }
  }

  // Most infeasible basic variable, scaled by the row norm of B^-1.
  std::size_t choose_row() const {
    std::size_t best = kNone;
    double best_score = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = xb_[i];
      double infeas = 0.0;
      if (v < -kPrimalTol) {
        infeas = -v;
      } else {
        const double ub = upper_bound(head_[i]);
        if (v > ub + kPrimalTol) infeas = v - ub;
      }
      if (infeas == 0.0) continue;
      const double score = infeas * infeas / norm_[i];
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  void dual_iteration(std::size_t r, LpSolution& sol) {
    const std::size_t p = head_[r];
    const bool below = xb_[r] < 0.0;
    const double sigma = below ? 1.0 : -1.0;
    const double target = below ? 0.0 : upper_bound(p);
    double slope = below ? -xb_[r] : xb_[r] - target;

    // Nonbasic columns whose reduced cost moves toward the wrong sign as the
    // dual step grows; each one caps the step at |d_j| / |alpha_rj|.
    compute_row(r);
    cand_.clear();
    for (std::size_t j : row_nz_) {
      if (pos_[j] != kNone) continue;
      const double arj = prow_[j];
      if (std::abs(arj) <= kPivotTol) continue;
      const double sa = sigma * arj;
      if (upper_[j] ? sa <= 0.0 : sa >= 0.0) continue;
      cand_.push_back({j, std::max(0.0, d_[j] / sa), std::abs(arj)});
    }
    if (cand_.empty()) fail(ErrorKind::internal, "LP: infeasible row in a problem with a feasible origin");

    // Bound flipping: pass breakpoints of boxed columns, in order, while
    // flipping them alone still leaves the row infeasible.
    const auto later = [](const Candidate& a, const Candidate& b) {
      return a.ratio != b.ratio ? a.ratio > b.ratio : a.j > b.j;
    };
    std::make_heap(cand_.begin(), cand_.end(), later);
    auto end = cand_.end();
    flips_.clear();
    while (end - cand_.begin() > 1) {
      const Candidate& top = cand_.front();
      const double range = upper_bound(top.j);
      if (range == kInf || slope - top.mag * range <= kPrimalTol) break;
      slope -= top.mag * range;
      flips_.push_back(top.j);
      std::pop_heap(cand_.begin(), end, later);
      --end;
    }
    // Harris: among the remaining breakpoints within a relaxed step, take
    // the largest pivot.
    double relaxed = kInf;
    for (auto it = cand_.begin(); it != end; ++it)
      relaxed = std::min(relaxed, (std::abs(d_[it->j]) + opts_.optimality_tol) / it->mag);
    auto pick = cand_.begin();
    for (auto it = cand_.begin(); it != end; ++it)
      if (it->ratio <= relaxed && it->mag > pick->mag) pick = it;
    const std::size_t q = pick->j;
    const double t = pick->ratio;

    if (!flips_.empty()) apply_flips(sol);

    for (std::size_t j : row_nz_)
      if (pos_[j] == kNone) d_[j] -= t * sigma * prow_[j];
    d_[q] = 0.0;
    d_[p] = -t * sigma;

    compute_column(q);
    const double theta = (xb_[r] - target) / alpha_[r];
    const double start = upper_[q] ? ub_[q] : 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (alpha_[i] != 0.0) xb_[i] -= theta * alpha_[i];
    upper_[p] = below ? 0 : 1;
    upper_[q] = 0;
    update_weights(r);
    replace(r, q);
    xb_[r] = start + theta;
    ++sol.pivots;
  }

  // Moves every column in flips_ to its other bound and updates x_B.
  void apply_flips(LpSolution& sol) {
    work_.setZero();
    for (std::size_t j : flips_) {
      const double step = upper_[j] ? -ub_[j] : ub_[j];
      upper_[j] ^= 1;
      ++sol.bound_flips;
      const auto rows = cols_.row_cols(j);
      const auto vals = cols_.row_values(j);
      for (std::size_t e = 0; e < rows.size(); ++e) work_[static_cast<Eigen::Index>(rows[e])] += step * vals[e];
    }
    basis_.ftran(work_);
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= work_[static_cast<Eigen::Index>(i)];
  }

  // Returns false when the pivot budget ran out.
  bool primal_phase(LpSolution& sol) {
    std::size_t since_refactor = 0;
    std::size_t degenerate_run = 0;
    bool bland = false;
    bool verified = false;
    for (;;) {
      if (out_of_budget(sol)) return false;
      if (since_refactor >= refactor_interval_) {
        reinvert();
        since_refactor = 0;
      }

      const std::size_t q = price(bland);
      if (q == kNone) {
        // Confirm optimality against freshly recomputed values and duals.
        if (verified || since_refactor == 0) return true;
        reinvert();
        since_refactor = 0;
        verified = true;
        continue;
      }
      verified = false;

      compute_column(q);
      const double s = upper_[q] ? -1.0 : 1.0;
      const auto [leave, theta] = ratio_test(q, s, bland);
      if (theta == kInf) fail(ErrorKind::internal, "LP: unbounded ray in a bounded problem");

      for (std::size_t i = 0; i < m_; ++i)
        if (alpha_[i] != 0.0) xb_[i] -= s * theta * alpha_[i];

      if (leave == kNone) {
        upper_[q] ^= 1;
        ++sol.bound_flips;
      } else {
        primal_pivot(q, leave, s, theta);
        ++sol.pivots;
        ++since_refactor;
      }

      if (theta <= 1e-12) {
        if (++degenerate_run > opts_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  bool eligible(std::size_t j) const {
    if (pos_[j] != kNone) return false;
    return upper_[j] ? d_[j] < -opts_.optimality_tol : d_[j] > opts_.optimality_tol;
  }

  // Devex pricing, or the lowest eligible index under Bland's rule.
  std::size_t price(bool bland) const {
    std::size_t best = kNone;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (!eligible(j)) continue;
      if (bland) return j;
      const double score = d_[j] * d_[j] / weight_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Column of A (or of the slack identity) dotted with a dense row vector.
  double dot_column(std::size_t j, const double* row) const {
    if (j >= n_) return row[j - n_];
    const auto rows = cols_.row_cols(j);
    const auto vals = cols_.row_values(j);
    double acc = 0.0;
    for (std::size_t p = 0; p < rows.size(); ++p) acc += row[rows[p]] * vals[p];
    return acc;
  }

  // alpha = B^-1 a_q.
  void compute_column(std::size_t q) {
    work_.setZero();
    if (q >= n_) {
      work_[static_cast<Eigen::Index>(q - n_)] = 1.0;
    } else {
      const auto rows = cols_.row_cols(q);
      const auto vals = cols_.row_values(q);
      for (std::size_t p = 0; p < rows.size(); ++p) work_[static_cast<Eigen::Index>(rows[p])] = vals[p];
    }
    basis_.ftran(work_);
    for (std::size_t i = 0; i < m_; ++i) alpha_[i] = work_[static_cast<Eigen::Index>(i)];
  }

  // rho_ = e_r' B^-1 and prow_ = rho_ [A I], accumulated row by row over the
  // nonzeros of rho_. row_nz_ lists the columns touched (basic ones included).
  void compute_row(std::size_t r) {
    for (std::size_t j : row_nz_) {
      prow_[j] = 0.0;
      in_row_[j] = 0;
    }
    row_nz_.clear();
    const auto ptr = lp_.a.row_ptr();
    const auto idx = lp_.a.col_idx();
    const auto val = lp_.a.values();
    rho_.setZero();
    rho_[static_cast<Eigen::Index>(r)] = 1.0;
    basis_.btran(rho_);
    // Entries below kDropTol are rounding debris of the solves.
    std::size_t work = 0;
    for (std::size_t t = 0; t < m_; ++t) {
      double& v = rho_[static_cast<Eigen::Index>(t)];
      if (std::abs(v) < kDropTol) {
        v = 0.0;
        continue;
      }
      work += 1 + ptr[t + 1] - ptr[t];
    }
    if (4 * work > n_ + m_) {
      // Dense pivot row: accumulate without bookkeeping, then collect.
      for (std::size_t t = 0; t < m_; ++t) {
        const double v = rho_[static_cast<Eigen::Index>(t)];
        if (v == 0.0) continue;
        prow_[n_ + t] += v;
        for (std::size_t e = ptr[t]; e < ptr[t + 1]; ++e) prow_[idx[e]] += v * val[e];
      }
      for (std::size_t j = 0; j < n_ + m_; ++j)
        if (prow_[j] != 0.0) row_nz_.push_back(j);
      return;
    }
    auto touch = [&](std::size_t j, double v) {
      if (!in_row_[j]) {
        in_row_[j] = 1;
        row_nz_.push_back(j);
      }
      prow_[j] += v;
    };
    for (std::size_t t = 0; t < m_; ++t) {
      const double v = rho_[static_cast<Eigen::Index>(t)];
      if (v == 0.0) continue;
      touch(n_ + t, v);
      for (std::size_t e = ptr[t]; e < ptr[t + 1]; ++e) touch(idx[e], v * val[e]);
    }
  }

  // Returns the leaving row position (kNone for a bound flip of the entering
  // variable) and the step length.
  std::pair<std::size_t, double> ratio_test(std::size_t q, double s, bool bland) const {
    const double flip = upper_bound(q);
    auto limit = [&](std::size_t i, double slack) {
      const double delta = s * alpha_[i];
      if (delta > kPivotTol) return (std::max(0.0, xb_[i]) + slack) / delta;
      if (delta < -kPivotTol) {
        const double ub = upper_bound(head_[i]);
        if (ub == kInf) return kInf;
        return (std::max(0.0, ub - xb_[i]) + slack) / -delta;
      }
      return kInf;
    };

    // Harris two-pass: bound the step with slightly relaxed bounds, then pick
    // among the rows that block within that bound. Normally the largest
    // pivot wins; under Bland's rule the lowest variable index among the
    // reasonably sized pivots does.
    double relaxed = kInf;
    for (std::size_t i = 0; i < m_; ++i) relaxed = std::min(relaxed, limit(i, kHarrisTol));
    if (flip <= relaxed) return {kNone, flip};
    double max_mag = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (limit(i, 0.0) <= relaxed) max_mag = std::max(max_mag, std::abs(alpha_[i]));
    std::size_t leave = kNone;
    double best_mag = 0.0;
    double theta = kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      const double lim = limit(i, 0.0);
      if (lim > relaxed) continue;
      const double mag = std::abs(alpha_[i]);
      const bool better = bland ? mag >= 1e-3 * max_mag && (leave == kNone || head_[i] < head_[leave])
                                : mag > best_mag;
      if (better) {
        best_mag = mag;
        leave = i;
        theta = lim;
      }
    }
    return {leave, theta};
  }

  void primal_pivot(std::size_t q, std::size_t r, double s, double theta) {
    const std::size_t out = head_[r];
    const double ar = alpha_[r];

    // Reduced-cost and Devex weight updates along the pivot row.
    compute_row(r);
    const double ratio = d_[q] / ar;
    const double wq = std::max(weight_[q], 1.0);
    bool reset = false;
    for (std::size_t j : row_nz_) {
      if (pos_[j] != kNone || j == q) continue;
      const double arj = prow_[j];
      if (arj == 0.0) continue;
      d_[j] -= ratio * arj;
      const double g = arj / ar;
      weight_[j] = std::max(weight_[j], g * g * wq);
      if (weight_[j] > kDevexReset) reset = true;
    }
    d_[q] = 0.0;
    d_[out] = -ratio;
    weight_[out] = std::max(wq / (ar * ar), 1.0);
    if (reset) std::fill(weight_.begin(), weight_.end(), 1.0);

    upper_[out] = (out < n_ && s * ar < 0.0) ? 1 : 0;
    upper_[q] = 0;
    replace(r, q);
    xb_[r] = s > 0.0 ? theta : upper_bound(q) - theta;
  }

  // Basis change at position r using the entering column in alpha_.
  void replace(std::size_t r, std::size_t q) {
    pos_[head_[r]] = kNone;
    head_[r] = q;
    pos_[q] = r;
    basis_.update(r, alpha_);
  }

  // Dual steepest-edge weights ||e_i' B^-1||^2 after a pivot on row r, from
  // rho_ and alpha_ of that pivot.
  void update_weights(std::size_t r) {
    const double ar = alpha_[r];
    const double wr = rho_.squaredNorm();
    tau_ = rho_;
    basis_.ftran(tau_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || alpha_[i] == 0.0) continue;
      const double f = alpha_[i] / ar;
      norm_[i] = std::max(norm_[i] - 2.0 * f * tau_[static_cast<Eigen::Index>(i)] + f * f * wr, 1e-12);
    }
    norm_[r] = std::max(wr / (ar * ar), 1e-12);
  }

  void reinvert() {
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t r = 0; r < m_; ++r) {
      const auto col = static_cast<int>(r);
      const std::size_t j = head_[r];
      if (j >= n_) {
        entries.emplace_back(static_cast<int>(j - n_), col, 1.0);
        continue;
      }
      const auto rows = cols_.row_cols(j);
      const auto vals = cols_.row_values(j);
      for (std::size_t e = 0; e < rows.size(); ++e) entries.emplace_back(static_cast<int>(rows[e]), col, vals[e]);
    }
    basis_.factor(entries);

    // x_B = B^-1 (b - sum of nonbasic columns sitting at their upper bound).
    for (std::size_t t = 0; t < m_; ++t) work_[static_cast<Eigen::Index>(t)] = lp_.b[t];
    for (std::size_t j = 0; j < n_; ++j) {
      if (pos_[j] != kNone || !upper_[j]) continue;
      const auto rows = cols_.row_cols(j);
      const auto vals = cols_.row_values(j);
      for (std::size_t p = 0; p < rows.size(); ++p) work_[static_cast<Eigen::Index>(rows[p])] -= ub_[j] * vals[p];
    }
    basis_.ftran(work_);
    for (std::size_t i = 0; i < m_; ++i) xb_[i] = work_[static_cast<Eigen::Index>(i)];

    for (std::size_t i = 0; i < m_; ++i) work_[static_cast<Eigen::Index>(i)] = cost(head_[i]);
    basis_.btran(work_);
    for (std::size_t j = 0; j < n_ + m_; ++j)
      d_[j] = pos_[j] != kNone ? 0.0 : cost(j) - dot_column(j, work_.data());
  }

  const LinearProgram& lp_;
  std::vector<double> ub_;
  const LpOptions& opts_;
  std::size_t n_, m_;
  SparseMatrix cols_;
  BasisFactor basis_;
  Eigen::VectorXd work_, rho_, tau_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> pos_;
  std::vector<char> upper_;
  std::vector<double> xb_;
  std::vector<double> alpha_;
  std::vector<double> norm_;
  std::vector<double> cost_;
  std::vector<double> d_;
  std::vector<double> weight_;
  std::vector<double> prow_;
  std::vector<char> in_row_;
  std::vector<std::size_t> row_nz_;
  std::vector<Candidate> cand_;
  std::vector<std::size_t> flips_;
  std::size_t refactor_interval_ = kRefactorInterval;
  std::size_t budget_ = 0;
};

// Geometric-mean equilibration of the nonzeros, alternating rows and
// columns. Factors are rounded to powers of two so scaling is exact.
std::pair<std::vector<double>, std::vector<double>> equilibrate(const SparseMatrix& a, int passes) {
  std::vector<double> row(a.rows(), 1.0), col(a.cols(), 1.0);
  const SparseMatrix at = a.transposed();
  auto pass = [](const SparseMatrix& m, std::vector<double>& own, const std::vector<double>& other) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto idx = m.row_cols(r);
      const auto val = m.row_values(r);
      double lo = kInf, hi = 0.0;
      for (std::size_t p = 0; p < idx.size(); ++p) {
        const double v = std::abs(val[p]) * own[r] * other[idx[p]];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > 0.0) own[r] /= std::sqrt(lo * hi);
    }
  };
  for (int k = 0; k < passes; ++k) {
    pass(a, row, col);
    pass(at, col, row);
  }
  auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
  for (double& v : row) v = pow2(v);
  for (double& v : col) v = pow2(v);
  return {std::move(row), std::move(col)};
}

LpSolution solve_scaled(const LinearProgram& lp, const LpOptions& opts) {
  // The simplex runs on R A S with costs g S c, right-hand sides R b and
  // column bounds [0, 1/s_j]. g brings the largest cost to about one, so the
  // tolerances are relative to it.
  const auto [row, col] = equilibrate(lp.a, 4);
  LinearProgram scaled;
  scaled.c.resize(lp.nvars());
  std::vector<double> ub(lp.nvars());
  double cmax = 0.0;
  for (std::size_t j = 0; j < lp.nvars(); ++j) {
    scaled.c[j] = lp.c[j] * col[j];
    cmax = std::max(cmax, std::abs(scaled.c[j]));
    ub[j] = 1.0 / col[j];
  }
  if (cmax > 0.0) {
    const double g = std::exp2(-std::round(std::log2(cmax)));
    for (double& v : scaled.c) v *= g;
  }
  scaled.b.resize(lp.nrows());
  for (std::size_t r = 0; r < lp.nrows(); ++r) scaled.b[r] = lp.b[r] * row[r];
  std::vector<double> vals(lp.a.values().begin(), lp.a.values().end());
  for (std::size_t r = 0, p = 0; r < lp.nrows(); ++r)
    for (std::size_t c : lp.a.row_cols(r)) vals[p++] *= row[r] * col[c];
  scaled.a = lp.a.with_values(std::move(vals));

  Simplex simplex(scaled, std::move(ub), opts);
  auto sol = simplex.run();
  sol.objective = 0.0;
  for (std::size_t j = 0; j < lp.nvars(); ++j) {
    sol.z[j] = std::clamp(sol.z[j] * col[j], 0.0, 1.0);
    sol.objective += lp.c[j] * sol.z[j];
  }
  return sol;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  auto sol = solve_scaled(lp, opts);
  if (sol.status != LpStatus::optimal) return sol;
  const double viol = max_violation(lp, sol.z);
  if (viol > opts.feasibility_tol)
    fail(ErrorKind::internal, "LP: solution violates constraints by " + std::to_string(viol));
  return sol;
}

}  // namespace tpgm
