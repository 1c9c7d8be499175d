#pragma once

// Closed-form probability bounds for random Gaussian / Bernoulli designs,
// the SNR scaling they imply and the sample-complexity expression.
// Logarithms are natural throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "olsrec/errors.hpp"

namespace olsrec {

namespace detail {
inline void require_open_unit(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0))
    throw InvalidParam(std::string(name) + " = " + std::to_string(x) + " must lie in (0, 1)");
}
}  // namespace detail

/// Concentration exponent c0(eps) = eps^2/4 - eps^3/6.
inline double c0(double eps) {
  detail::require_open_unit(eps, "eps");
  return eps * eps / 4.0 - eps * eps * eps / 6.0;
}

/// c1(eps) = sqrt((1 - eps) / (1 + eps)).
inline double c1(double eps) {
  detail::require_open_unit(eps, "eps");
  return std::sqrt((1.0 - eps) / (1.0 + eps));
}

struct BoundParams {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  double eps = 0.5;
  double delta = 0.5;
  double t = 1.0;

  void validate() const {
    detail::require_open_unit(eps, "eps");
    detail::require_open_unit(delta, "delta");
    if (!(t > 0.0)) throw InvalidParam("t must be positive");
    if (k < 1) throw InvalidParam("k must be at least 1");
    if (k > n) throw InvalidParam("k must not exceed n");
    if (k > m) throw InvalidParam("k must not exceed m");
  }
};

struct BoundResult {
  double p1_base = 0.0;    // 1 - 2 exp(-(n-k+1) c0(eps)), before squaring
  double p1 = 0.0;
  double p2 = 0.0;
  double p3_factor = 0.0;  // raised to the power m - k
  double product_literal = 0.0;  // p1 * p2 * p3_factor^(m-k) exactly as printed
  double total_raw = 0.0;  // product_literal, or min(product_literal, 0) when vacuous
  double total = 0.0;      // total_raw clamped to [0, 1], for display
  bool vacuous = false;    // some factor is non-positive
};

/// Probability that p2's singular-value event fails:
/// 2 (12/delta)^k exp(-n c0(delta/2)).
inline double sigma_concentration_tail(std::size_t n, std::size_t k, double delta) {
  detail::require_open_unit(delta, "delta");
  return 2.0 * std::exp(static_cast<double>(k) * std::log(12.0 / delta) -
                        static_cast<double>(n) * c0(delta / 2.0));
}

/// Lower bound on the probability that OLS recovers a k-sparse support in
/// k iterations from n random measurements.
inline BoundResult theorem2_bound(const BoundParams& p) {
  p.validate();
  const auto n = static_cast<double>(p.n);
  const auto k = static_cast<double>(p.k);
  BoundResult r;
  r.p1_base = 1.0 - 2.0 * std::exp(-(n - k + 1.0) * c0(p.eps));
  r.p1 = r.p1_base * r.p1_base;
  r.p2 = 1.0 - sigma_concentration_tail(p.n, p.k, p.delta);

  const double ratio = (1.0 - p.eps) / (1.0 + p.eps);
  const double shrink = std::pow(1.0 - p.delta, 4);
  const double spread = (1.0 + p.delta) * (1.0 + p.delta);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    const double remaining = static_cast<double>(p.k - i);
    const double denom = k * (1.0 / (remaining * p.t * p.t) + spread);
    sum += std::exp(-n * ratio * shrink / denom);
  }
  r.p3_factor = 1.0 - 2.0 * sum;

  r.product_literal = r.p1 * r.p2 * std::pow(r.p3_factor, static_cast<double>(p.m - p.k));
  r.vacuous = r.p1_base <= 0.0 || r.p2 <= 0.0 || r.p3_factor <= 0.0;
  r.total_raw = r.vacuous ? std::min(r.product_literal, 0.0) : r.product_literal;
  r.total = std::clamp(r.total_raw, 0.0, 1.0);
  return r;
}

/// SNR implied by beta_min = (1 + delta + t) eps_eta: k (1 + delta + t)^2.
inline double snr_requirement(std::size_t k, double delta, double t) {
  if (k < 1) throw InvalidParam("k must be at least 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidParam("delta must lie in [0, 1)");
  if (!(t >= 0.0)) throw InvalidParam("t must be nonnegative");
  const double s = 1.0 + delta + t;
  return static_cast<double>(k) * s * s;
}

struct ComplexityParams {
  double gamma = 0.1;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 1.0;

  void validate() const {
    detail::require_open_unit(gamma, "gamma");
    if (!(C1 > 0.0 && C2 > 0.0 && C3 > 0.0)) throw InvalidParam("C1, C2, C3 must be positive");
  }
};

/// The two branches of the sufficient measurement count.
struct ComplexityTerms {
  double log_branch = 0.0;     // (2 / C1) k ln(m / gamma)
  double linear_branch = 0.0;  // C2 k + ln(12 / gamma^2) / C3
};

inline ComplexityTerms sample_complexity_terms(std::size_t k, std::size_t m,
                                               const ComplexityParams& c) {
  c.validate();
  if (k < 1 || m < 1) throw InvalidParam("k and m must be at least 1");
  const auto kd = static_cast<double>(k);
  return {2.0 / c.C1 * kd * std::log(static_cast<double>(m) / c.gamma),
          c.C2 * kd + std::log(12.0 / (c.gamma * c.gamma)) / c.C3};
}

inline std::size_t sample_complexity(std::size_t k, std::size_t m, const ComplexityParams& c) {
  const ComplexityTerms t = sample_complexity_terms(k, m, c);
  return static_cast<std::size_t>(std::ceil(std::max(t.log_branch, t.linear_branch)));
}

/// Effective C1 that makes the logarithmic branch equal an observed
/// measurement count: C1 = 2 k ln(m / gamma) / n_observed.
inline double calibrate_c1(std::size_t k, std::size_t m, double gamma, std::size_t n_observed) {
  detail::require_open_unit(gamma, "gamma");
  if (n_observed < 1) throw InvalidParam("n_observed must be at least 1");
  return 2.0 * static_cast<double>(k) * std::log(static_cast<double>(m) / gamma) /
         static_cast<double>(n_observed);
}

}  // namespace olsrec
