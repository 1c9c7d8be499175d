#pragma once

// Exact-recovery certificates for the greedy solvers: ERC constants for OMP
// and OLS, the per-iteration selection ratio, the noisy sufficient condition
// on the smallest nonzero coefficient, and the comparison against the older
// OMP bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "olsrec/linalg.hpp"

namespace olsrec {

struct ErcReport {
  double m_omp = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> m_ols_per_iter;  // M_{i+1} for prefixes S_0 .. S_{len-1}
  std::vector<bool> erc_holds;         // m_ols_per_iter[i] < 1
  IndexList path;

  bool all_hold() const {
    return std::all_of(erc_holds.begin(), erc_holds.end(), [](bool b) { return b; });
  }
};

struct SelectionRatio {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

struct Theorem1Verdict {
  double beta_min = 0.0;
  double rhs_literal = 0.0;     // sigma_min * eps + eps / ((1 - M) sigma_min^2)
  double rhs_consistent = 0.0;  // eps / sigma_min + eps / ((1 - M) sigma_min^2)
  bool holds_literal = false;
  bool holds_consistent = false;
  double eps_eta = 0.0;
  double sigma_min = 0.0;
  double M = 0.0;
};

namespace detail {

inline IndexList sorted_unique(std::span<const std::size_t> idx) {
  IndexList s(idx.begin(), idx.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline IndexList complement_of(std::span<const std::size_t> sorted, std::size_t m) {
  IndexList out;
  out.reserve(m - std::min(m, sorted.size()));
  std::size_t p = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (p < sorted.size() && sorted[p] == j) {
      ++p;
      continue;
    }
    out.push_back(j);
  }
  return out;
}

inline IndexList set_difference(std::span<const std::size_t> a_sorted,
                                std::span<const std::size_t> b) {
  IndexList bs = sorted_unique(b);
  IndexList out;
  std::set_difference(a_sorted.begin(), a_sorted.end(), bs.begin(), bs.end(),
                      std::back_inserter(out));
  return out;
}

inline IndexList checked_support(std::span<const std::size_t> S_opt, Eigen::Index m) {
  IndexList s = sorted_unique(S_opt);
  if (s.size() != S_opt.size()) throw InvalidParam("support has repeated indices");
  if (s.empty()) throw InvalidParam("support is empty");
  if (s.back() >= static_cast<std::size_t>(m)) throw InvalidParam("support index out of range");
  return s;
}

}  // namespace detail

/// Columns P a_j / ||P a_j|| for j in `targets` (ascending), where P projects
/// onto the orthogonal complement of the selected columns.
inline Matrix normalized_projected_columns(const Matrix& H, std::span<const std::size_t> selected,
                                           std::span<const std::size_t> targets,
                                           double tol = kRankTol) {
  const IndexList tgt = detail::sorted_unique(targets);
  Matrix out = select_columns(H, tgt);
  if (!selected.empty()) {
    const Matrix B = select_columns(H, selected);
    Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeThinU);
    detail::require_full_column_rank(svd, B.rows(), B.cols());
    const Matrix& U = svd.matrixU();
    out -= U * (U.transpose() * out);
  }
  for (std::size_t c = 0; c < tgt.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    const double nrm = out.col(col).norm();
    const double ref = H.col(static_cast<Eigen::Index>(tgt[c])).norm();
    if (!(nrm > tol * ref)) throw DegenerateColumn(tgt[c]);
    out.col(col) /= nrm;
  }
  return out;
}

/// ||Hbar^+ Htilde||_{1,1} for the true support S_opt.
inline double erc_omp(const Matrix& H, std::span<const std::size_t> S_opt) {
  const IndexList s = detail::checked_support(S_opt, H.cols());
  const IndexList rest = detail::complement_of(s, static_cast<std::size_t>(H.cols()));
  const Matrix Hbar = select_columns(H, s);
  const Matrix Htil = select_columns(H, rest);
  return induced_norm_1_1(least_squares(Hbar, Htil));
}

/// M_{i+1} = ||Phi^+ Psi||_{1,1} after the true indices S_i have been chosen.
inline double erc_ols_step(const Matrix& H, std::span<const std::size_t> S_opt_sorted,
                           std::span<const std::size_t> S_i) {
  const IndexList remaining = detail::set_difference(S_opt_sorted, S_i);
  const IndexList off = detail::complement_of(S_opt_sorted, static_cast<std::size_t>(H.cols()));
  const Matrix Phi = normalized_projected_columns(H, S_i, remaining);
  const Matrix Psi = normalized_projected_columns(H, S_i, off);
  return induced_norm_1_1(least_squares(Phi, Psi));
}

/// The longest prefix of a selection sequence made only of true indices.
inline IndexList true_prefix(std::span<const std::size_t> selected,
                             std::span<const std::size_t> S_opt) {
  const IndexList s = detail::sorted_unique(S_opt);
  IndexList out;
  for (auto j : selected) {
    if (!std::binary_search(s.begin(), s.end(), j)) break;
    out.push_back(j);
  }
  return out;
}

/// OLS ERC constants along a nested path of true indices. Prefixes
/// S_0 = {} .. S_{min(len, k-1)} are evaluated, so a complete path of length
/// k yields k constants.
inline ErcReport erc_ols_path(const Matrix& H, std::span<const std::size_t> S_opt,
                              std::span<const std::size_t> path) {
  const IndexList s = detail::checked_support(S_opt, H.cols());
  if (detail::sorted_unique(path).size() != path.size())
    throw InvalidParam("path has repeated indices");
  for (auto j : path)
    if (!std::binary_search(s.begin(), s.end(), j))
      throw InvalidParam("path index " + std::to_string(j) + " is not in the true support");

  ErcReport rep;
  rep.path.assign(path.begin(), path.end());
  rep.m_omp = erc_omp(H, s);
  const std::size_t last = std::min(path.size(), s.size() - 1);
  for (std::size_t i = 0; i <= last; ++i) {
    const double M = erc_ols_step(H, s, path.subspan(0, i));
    rep.m_ols_per_iter.push_back(M);
    rep.erc_holds.push_back(M < 1.0);
  }
  return rep;
}

/// rho(r) = ||Psi^T r||_inf / ||Phi^T r||_inf. Values below one guarantee
/// that the next OLS pick is a true index.
inline SelectionRatio selection_ratio(const Matrix& H, std::span<const std::size_t> S_opt,
                                      std::span<const std::size_t> S_i, const Vector& r) {
  const IndexList s = detail::checked_support(S_opt, H.cols());
  const IndexList remaining = detail::set_difference(s, S_i);
  if (remaining.empty()) throw Indeterminate();
  const IndexList off = detail::complement_of(s, static_cast<std::size_t>(H.cols()));
  const Matrix Phi = normalized_projected_columns(H, S_i, remaining);
  const Matrix Psi = normalized_projected_columns(H, S_i, off);
  SelectionRatio out;
  out.numerator = off.empty() ? 0.0 : (Psi.transpose() * r).cwiseAbs().maxCoeff();
  out.denominator = (Phi.transpose() * r).cwiseAbs().maxCoeff();
  if (!(out.denominator > 1e-14 * r.norm()) || out.denominator == 0.0) throw Indeterminate();
  out.value = out.numerator / out.denominator;
  return out;
}

/// Upper bound on rho(r_i) assembled from the proof chain:
/// M + eps / (sigma^2 (beta_min - eps / sigma)). Infinite when beta_min does
/// not exceed eps / sigma.
inline double selection_ratio_bound(double M, double eps_eta, double sigma_min, double beta_min) {
  const double gap = beta_min - eps_eta / sigma_min;
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  return M + eps_eta / (sigma_min * sigma_min * gap);
}

/// Evaluates the noisy sufficient condition for one iteration, in the
/// printed form (first term sigma_min * eps) and in the form the
/// derivation supports (first term eps / sigma_min).
inline Theorem1Verdict theorem1_verdict(double beta_min, double eps_eta, double sigma_min,
                                        double M) {
  if (!(M < 1.0)) throw ConditionInapplicable("M = " + std::to_string(M) + " is not below 1");
  if (!(sigma_min > 0.0)) throw ConditionInapplicable("sigma_min(Hbar) must be positive");
  if (!(eps_eta >= 0.0)) throw InvalidParam("eps_eta must be nonnegative");
  Theorem1Verdict v;
  v.beta_min = beta_min;
  v.eps_eta = eps_eta;
  v.sigma_min = sigma_min;
  v.M = M;
  const double tail = eps_eta / ((1.0 - M) * sigma_min * sigma_min);
  v.rhs_literal = sigma_min * eps_eta + tail;
  v.rhs_consistent = eps_eta / sigma_min + tail;
  v.holds_literal = beta_min > v.rhs_literal;
  v.holds_consistent = beta_min > v.rhs_consistent;
  return v;
}

inline double beta_min_on(const Vector& beta, std::span<const std::size_t> S_opt) {
  double bmin = std::numeric_limits<double>::infinity();
  for (auto j : S_opt) bmin = std::min(bmin, std::abs(beta(static_cast<Eigen::Index>(j))));
  return bmin;
}

/// Per-iteration verdicts along `path` from precomputed ERC constants.
inline std::vector<Theorem1Verdict> theorem1_check(const Matrix& H,
                                                   std::span<const std::size_t> S_opt,
                                                   const Vector& beta, double eps_eta,
                                                   const ErcReport& erc) {
  const IndexList s = detail::checked_support(S_opt, H.cols());
  const double sigma = spectral_extremes(select_columns(H, s)).sigma_min;
  const double bmin = beta_min_on(beta, s);
  std::vector<Theorem1Verdict> out;
  out.reserve(erc.m_ols_per_iter.size());
  for (double M : erc.m_ols_per_iter) out.push_back(theorem1_verdict(bmin, eps_eta, sigma, M));
  return out;
}

inline std::vector<Theorem1Verdict> theorem1_check(const Matrix& H,
                                                   std::span<const std::size_t> S_opt,
                                                   const Vector& beta, double eps_eta,
                                                   std::span<const std::size_t> path) {
  return theorem1_check(H, S_opt, beta, eps_eta, erc_ols_path(H, S_opt, path));
}

/// sigma_min^3 < 1 / (1 - M_OMP): the noisy condition is weaker than the
/// earlier OMP result.
inline bool remark1_holds(double sigma_min, double m_omp) {
  if (!(m_omp < 1.0))
    throw ConditionInapplicable("M_OMP = " + std::to_string(m_omp) + " is not below 1");
  return sigma_min * sigma_min * sigma_min < 1.0 / (1.0 - m_omp);
}

inline bool remark1_comparison(const Matrix& H, std::span<const std::size_t> S_opt) {
  const IndexList s = detail::checked_support(S_opt, H.cols());
  const double m_omp = erc_omp(H, s);
  return remark1_holds(spectral_extremes(select_columns(H, s)).sigma_min, m_omp);
}

}  // namespace olsrec
