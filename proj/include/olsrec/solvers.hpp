#pragma once

// Greedy support identification (OLS and OMP) with per-iteration tracing,
// the exhaustive l0 oracle, and the noise/residual decomposition used by the
// recovery analysis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olsrec/instance.hpp"
#include "olsrec/linalg.hpp"

namespace olsrec {

enum class Algorithm { OLS, OMP, Exhaustive };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::OLS: return "OLS";
    case Algorithm::OMP: return "OMP";
    case Algorithm::Exhaustive: return "EXHAUSTIVE";
  }
  return "?";
}

enum class TieBreak { LowestIndex };

struct SolverOptions {
  std::optional<std::size_t> max_iters;  // defaults to k
  std::optional<double> residual_stop;   // stop once ||r|| <= residual_stop
  bool normalize_columns = false;
  TieBreak tie_break = TieBreak::LowestIndex;
  // Relative to ||a_j||: candidates with ||P a_j|| <= tol * ||a_j|| are skipped.
  double degenerate_skip_tol = kRankTol;
  bool record_scores = true;
};

using ScoreMap = std::map<std::size_t, double>;

struct Selection {
  std::size_t index = 0;
  double score = 0.0;
  ScoreMap scores;
};

struct SolverTrace {
  Algorithm algorithm = Algorithm::OLS;
  IndexList selected;                  // selection order
  std::vector<double> residual_norms;  // ||r_0||, ..., ||r_T||
  std::vector<ScoreMap> scores;        // one map per iteration (may be empty)
  Vector coefficients;                 // least squares on `selected`, same order
  Vector residual;                     // final residual

  std::size_t iterations() const noexcept { return selected.size(); }

  IndexList support() const {
    IndexList s = selected;
    std::sort(s.begin(), s.end());
    return s;
  }

  /// ||y - H beta_hat||^2 on the final support.
  double objective() const {
    const double r = residual_norms.empty() ? 0.0 : residual_norms.back();
    return r * r;
  }

  /// Dense coefficient vector of length m.
  Vector beta(Eigen::Index m) const {
    Vector b = Vector::Zero(m);
    for (std::size_t c = 0; c < selected.size(); ++c)
      b(static_cast<Eigen::Index>(selected[c])) = coefficients(static_cast<Eigen::Index>(c));
    return b;
  }
};

namespace detail {

inline std::vector<char> exclusion_mask(Eigen::Index m, std::span<const std::size_t> excluded) {
  std::vector<char> mask(static_cast<std::size_t>(m), 0);
  for (auto j : excluded) {
    if (j >= mask.size()) throw InvalidInstance("excluded index out of range");
    mask[j] = 1;
  }
  return mask;
}

// Shared argmax over candidates. `score_of(j, projected_norm)` returns the
// selection score for a viable candidate; strict improvement keeps the
// lowest index on ties.
template <typename ScoreFn>
Selection argmax_viable(const Vector& projected_norms, const Vector& column_norms,
                        const std::vector<char>& excluded, double tol, bool record,
                        ScoreFn&& score_of) {
  Selection sel;
  bool found = false;
  for (Eigen::Index j = 0; j < projected_norms.size(); ++j) {
    if (excluded[static_cast<std::size_t>(j)]) continue;
    const double pn = projected_norms(j);
    if (!(pn > tol * column_norms(j))) continue;
    const double s = score_of(j, pn);
    if (record) sel.scores.emplace(static_cast<std::size_t>(j), s);
    if (!found || s > sel.score) {
      sel.index = static_cast<std::size_t>(j);
      sel.score = s;
      found = true;
    }
  }
  if (!found) throw NoViableCandidate();
  return sel;
}

}  // namespace detail

/// OLS selection from an already projected dictionary PH = P_perp * H:
/// argmax_j |r^T PH_j| / ||PH_j||.
inline Selection ols_select_projected(const Vector& residual, const Matrix& PH,
                                      const Vector& column_norms,
                                      const std::vector<char>& excluded, double tol,
                                      bool record = true) {
  const Vector pn = PH.colwise().norm().transpose();
  const Vector corr = PH.transpose() * residual;
  return detail::argmax_viable(pn, column_norms, excluded, tol, record,
                               [&](Eigen::Index j, double norm) {
                                 return std::abs(corr(j)) / norm;
                               });
}

/// OLS selection rule: the candidate maximizing the normalized projected
/// correlation |r^T P a_j| / ||P a_j||. Ties go to the lowest index.
inline Selection ols_select(const Vector& residual, const Projector& P_perp, const Matrix& H,
                            std::span<const std::size_t> excluded, double tol = kRankTol) {
  if (residual.size() != H.rows() || P_perp.dim() != H.rows())
    throw InvalidInstance("ols_select: dimension mismatch");
  const Matrix PH = P_perp.apply(H);
  const Vector norms = H.colwise().norm().transpose();
  return ols_select_projected(residual, PH, norms, detail::exclusion_mask(H.cols(), excluded),
                              tol);
}

/// OMP selection rule: argmax_j |a_j^T r| over candidates outside the
/// selected span.
inline Selection omp_select_projected(const Vector& residual, const Matrix& H, const Matrix& PH,
                                      const Vector& column_norms,
                                      const std::vector<char>& excluded, double tol,
                                      bool record = true) {
  const Vector pn = PH.colwise().norm().transpose();
  const Vector corr = H.transpose() * residual;
  return detail::argmax_viable(pn, column_norms, excluded, tol, record,
                               [&](Eigen::Index j, double) { return std::abs(corr(j)); });
}

namespace detail {

inline Matrix unit_columns(const Matrix& H) {
  Matrix out = H;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double nrm = out.col(j).norm();
    if (nrm > 0.0) out.col(j) /= nrm;
  }
  return out;
}

inline SolverTrace greedy_solve(const MeasurementInstance& inst, const SolverOptions& opts,
                                Algorithm algo) {
  inst.validate();
  const std::size_t iters = opts.max_iters.value_or(inst.k);
  if (iters < 1) throw InvalidParam("max_iters must be at least 1");
  if (!(opts.degenerate_skip_tol >= 0.0)) throw InvalidParam("degenerate_skip_tol < 0");

  const Matrix H = opts.normalize_columns ? unit_columns(inst.H) : inst.H;
  const Vector& y = inst.y;
  const Vector col_norms = H.colwise().norm().transpose();
  std::vector<char> excluded(static_cast<std::size_t>(H.cols()), 0);

  Projector P = Projector::identity(H.rows());
  Matrix PH = H;
  Vector r = y;

  SolverTrace trace;
  trace.algorithm = algo;
  trace.residual_norms.push_back(r.norm());

  for (std::size_t it = 0; it < iters; ++it) {
    if (opts.residual_stop && r.norm() <= *opts.residual_stop) break;
    Selection sel = algo == Algorithm::OLS
                        ? ols_select_projected(r, PH, col_norms, excluded,
                                               opts.degenerate_skip_tol, opts.record_scores)
                        : omp_select_projected(r, H, PH, col_norms, excluded,
                                               opts.degenerate_skip_tol, opts.record_scores);
    const auto j = static_cast<Eigen::Index>(sel.index);
    const Vector a = H.col(j);

    // Projector downdate; the projected dictionary follows the same rank-one
    // correction since P v = v for v in the range of P.
    const Vector Pa = PH.col(j);
    const Vector v = Pa / Pa.norm();
    P = projector_downdate(P, a, opts.degenerate_skip_tol * col_norms(j));
    PH.noalias() -= v * (v.transpose() * PH);
    r = P.apply(y);

    excluded[sel.index] = 1;
    trace.selected.push_back(sel.index);
    trace.residual_norms.push_back(r.norm());
    if (opts.record_scores) trace.scores.push_back(std::move(sel.scores));
  }

  trace.coefficients = least_squares(select_columns(inst.H, trace.selected), y);
  trace.residual = std::move(r);
  return trace;
}

inline double binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0.0;
  k = std::min(k, m - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    c = c * static_cast<double>(m - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace detail

inline SolverTrace ols_solve(const MeasurementInstance& inst, const SolverOptions& opts = {}) {
  return detail::greedy_solve(inst, opts, Algorithm::OLS);
}

inline SolverTrace omp_solve(const MeasurementInstance& inst, const SolverOptions& opts = {}) {
  return detail::greedy_solve(inst, opts, Algorithm::OMP);
}

inline constexpr double kExhaustiveLimit = 1e6;

/// Exhaustive l0-constrained least squares over all supports of size k.
/// Supersets never increase the residual, so size-k supports attain the
/// minimum over sizes <= k. Ties resolve to the lexicographically first
/// support.
inline SolverTrace exhaustive_l0(const MeasurementInstance& inst) {
  inst.validate();
  const auto m = static_cast<std::size_t>(inst.m());
  const std::size_t k = inst.k;
  const double count = detail::binomial(m, k);
  if (count > kExhaustiveLimit) throw TooLarge(count);

  IndexList comb(k);
  for (std::size_t i = 0; i < k; ++i) comb[i] = i;

  double best = std::numeric_limits<double>::infinity();
  IndexList best_support;
  Vector best_coef;
  Vector best_residual;
  Matrix B(inst.n(), static_cast<Eigen::Index>(k));

  while (true) {
    for (std::size_t c = 0; c < k; ++c)
      B.col(static_cast<Eigen::Index>(c)) = inst.H.col(static_cast<Eigen::Index>(comb[c]));
    // Rank-deficient subsets still have a well-defined residual; use the
    // minimum-norm solution instead of rejecting them.
    Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector coef = svd.solve(inst.y);
    const Vector res = inst.y - B * coef;
    const double obj = res.squaredNorm();
    if (obj < best) {
      best = obj;
      best_support = comb;
      best_coef = coef;
      best_residual = res;
    }
    // next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }

  SolverTrace trace;
  trace.algorithm = Algorithm::Exhaustive;
  trace.selected = best_support;
  trace.residual_norms = {inst.y.norm(), std::sqrt(best)};
  trace.coefficients = best_coef;
  trace.residual = best_residual;
  return trace;
}

/// Split of the noise and the residual with respect to the true support:
/// eta = Hbar w + eta_perp and r_i = eta_perp + P_i Hbar_{i^c} z_{i^c}.
struct ResidualDecomposition {
  Vector eta_perp;     // P_k^perp eta
  Vector signal_part;  // P_i^perp Hbar_{i^c} z_{i^c}
  Vector w;            // Hbar^+ eta
  Vector z;            // beta_bar + w
  Vector residual;     // P_i^perp y, computed directly
  IndexList true_support;
  IndexList remaining;  // true indices not in S_i
};

inline ResidualDecomposition residual_decompose(const MeasurementInstance& inst,
                                                std::span<const std::size_t> selected) {
  if (!inst.beta_true || !inst.eta)
    throw InvalidDecomposition("beta_true and eta are both required");
  const IndexList support = inst.true_support();
  for (auto j : selected)
    if (!std::binary_search(support.begin(), support.end(), j))
      throw InvalidDecomposition("index " + std::to_string(j) + " is not in the true support");

  ResidualDecomposition d;
  d.true_support = support;
  const Matrix Hbar = select_columns(inst.H, support);
  d.eta_perp = complement_projector(Hbar).apply(*inst.eta);
  d.w = least_squares(Hbar, *inst.eta);
  d.z = select_entries(*inst.beta_true, support) + d.w;

  std::vector<char> chosen(support.size(), 0);
  for (auto j : selected) {
    auto pos = std::lower_bound(support.begin(), support.end(), j) - support.begin();
    chosen[static_cast<std::size_t>(pos)] = 1;
  }
  IndexList rem_pos;
  for (std::size_t p = 0; p < support.size(); ++p)
    if (!chosen[p]) {
      rem_pos.push_back(p);
      d.remaining.push_back(support[p]);
    }

  const Projector Pi = complement_projector(select_columns(inst.H, selected));
  const Vector signal = select_columns(inst.H, d.remaining) * select_entries(d.z, rem_pos);
  d.signal_part = Pi.apply(signal);
  d.residual = Pi.apply(inst.y);
  return d;
}

}  // namespace olsrec
