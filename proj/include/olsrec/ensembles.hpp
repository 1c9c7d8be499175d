#pragma once

// Reproducible random measurement ensembles, sparse signals and bounded
// noise, plus the two concentration experiments the probabilistic analysis
// rests on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "olsrec/bounds.hpp"
#include "olsrec/linalg.hpp"

namespace olsrec {

// Seed streams -------------------------------------------------------------

/// Role tags of the independent streams derived from one master seed.
enum class StreamRole : std::uint64_t {
  Matrix = 0x4d41545249580001ULL,
  Signal = 0x5349474e414c0002ULL,
  Noise = 0x4e4f495345000003ULL,
  Probe = 0x50524f4245000004ULL,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the (role, cell, trial) stream of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, StreamRole role, std::uint64_t cell = 0,
                                 std::uint64_t trial = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  h = splitmix64(h ^ cell);
  h = splitmix64(h ^ (trial * 0xd6e8feb86659fd93ULL));
  return h;
}

/// mt19937_64 with distribution code written out so that draws are
/// identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller (one variate per call).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound), rejection-sampled.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

private:
  std::mt19937_64 engine_;
};

// Matrices ----------------------------------------------------------------

enum class EnsembleKind { Gaussian, Bernoulli };

inline std::string to_string(EnsembleKind k) {
  return k == EnsembleKind::Gaussian ? "GAUSSIAN" : "BERNOULLI";
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gaussian;
  std::size_t n = 1;
  std::size_t m = 1;
  std::uint64_t seed = 0;
  bool unit_columns = false;  // rescale every column to unit l2 norm
};

/// Fills a column-major block with N(0, 1/n) or +-1/sqrt(n) entries.
inline void fill_ensemble(Rng& rng, EnsembleKind kind, Matrix& A) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(A.rows()));
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      A(i, j) = kind == EnsembleKind::Gaussian ? rng.normal() * scale : rng.sign() * scale;
}

inline Matrix draw_matrix(const EnsembleSpec& spec) {
  if (spec.n < 1 || spec.m < 1) throw InvalidParam("ensemble dimensions must be positive");
  Rng rng(spec.seed);
  Matrix H(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.m));
  fill_ensemble(rng, spec.kind, H);
  if (spec.unit_columns) H.colwise().normalize();
  return H;
}

// Signals -----------------------------------------------------------------

enum class MagnitudeLaw { Constant, UniformAboveMin, GaussianRejected };
enum class SignLaw { Random, Positive };

inline std::string to_string(MagnitudeLaw l) {
  switch (l) {
    case MagnitudeLaw::Constant: return "CONSTANT";
    case MagnitudeLaw::UniformAboveMin: return "UNIFORM_ABOVE_MIN";
    case MagnitudeLaw::GaussianRejected: return "GAUSSIAN_REJECTED";
  }
  return "?";
}

struct SignalSpec {
  std::size_t m = 1;
  std::size_t k = 1;
  double beta_min = 1.0;
  MagnitudeLaw magnitude_law = MagnitudeLaw::Constant;
  SignLaw sign_law = SignLaw::Random;
  std::uint64_t seed = 0;
};

struct SparseSignal {
  Vector beta;
  IndexList support;  // ascending
};

/// Uniformly random support of size k. Magnitudes: CONSTANT gives beta_min,
/// UNIFORM_ABOVE_MIN draws from [beta_min, 2 beta_min], GAUSSIAN_REJECTED
/// draws N(0, (2 beta_min)^2) and resamples until |x| >= beta_min.
inline SparseSignal draw_signal(const SignalSpec& spec) {
  if (spec.k > spec.m) throw InvalidParam("k must not exceed m");
  if (!(spec.beta_min > 0.0)) throw InvalidParam("beta_min must be positive");
  Rng rng(spec.seed);

  std::vector<std::size_t> perm(spec.m);
  for (std::size_t i = 0; i < spec.m; ++i) perm[i] = i;
  for (std::size_t i = 0; i < spec.k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(spec.m - i));
    std::swap(perm[i], perm[j]);
  }
  SparseSignal out;
  out.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.k));
  std::sort(out.support.begin(), out.support.end());

  out.beta = Vector::Zero(static_cast<Eigen::Index>(spec.m));
  for (auto j : out.support) {
    double value = spec.beta_min;
    switch (spec.magnitude_law) {
      case MagnitudeLaw::Constant:
        break;
      case MagnitudeLaw::UniformAboveMin:
        value = spec.beta_min * (1.0 + rng.uniform());
        break;
      case MagnitudeLaw::GaussianRejected: {
        double g;
        do g = 2.0 * spec.beta_min * rng.normal();
        while (std::abs(g) < spec.beta_min);
        value = g;
        break;
      }
    }
    if (spec.magnitude_law == MagnitudeLaw::GaussianRejected) {
      if (spec.sign_law == SignLaw::Positive) value = std::abs(value);
    } else if (spec.sign_law == SignLaw::Random) {
      value *= rng.sign();
    }
    out.beta(static_cast<Eigen::Index>(j)) = value;
  }
  return out;
}

// Noise -------------------------------------------------------------------

enum class NoiseMode { ExactNorm, UniformBall, GaussianClipped };

inline std::string to_string(NoiseMode m) {
  switch (m) {
    case NoiseMode::ExactNorm: return "EXACT_NORM";
    case NoiseMode::UniformBall: return "UNIFORM_BALL";
    case NoiseMode::GaussianClipped: return "GAUSSIAN_CLIPPED";
  }
  return "?";
}

struct NoiseSpec {
  std::size_t n = 1;
  double eps_eta = 0.0;
  NoiseMode mode = NoiseMode::ExactNorm;
  std::uint64_t seed = 0;
};

/// Noise with ||eta||_2 <= eps_eta. EXACT_NORM puts it on the sphere,
/// UNIFORM_BALL fills the ball uniformly, GAUSSIAN_CLIPPED draws
/// N(0, eps^2/n) entries and shrinks onto the ball when outside.
inline Vector draw_noise(const NoiseSpec& spec) {
  if (!(spec.eps_eta >= 0.0)) throw InvalidParam("eps_eta must be nonnegative");
  const auto n = static_cast<Eigen::Index>(spec.n);
  if (spec.eps_eta == 0.0) return Vector::Zero(n);
  Rng rng(spec.seed);
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = rng.normal();
  switch (spec.mode) {
    case NoiseMode::ExactNorm:
      return g * (spec.eps_eta / g.norm());
    case NoiseMode::UniformBall: {
      const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(spec.n));
      return g * (spec.eps_eta * radius / g.norm());
    }
    case NoiseMode::GaussianClipped: {
      g *= spec.eps_eta / std::sqrt(static_cast<double>(spec.n));
      const double nrm = g.norm();
      if (nrm > spec.eps_eta) g *= spec.eps_eta / nrm;
      return g;
    }
  }
  return g;
}

// Concentration experiments -------------------------------------------------

struct ProjectorConcentration {
  double empirical_mean = 0.0;  // mean of ||P_k u||^2 / E||u||^2
  double expected = 0.0;        // k / n
  double violation_rate = 0.0;  // fraction outside (1 +- eps) k/n
  double tail_bound = 0.0;      // 2 exp(-k c0(eps))
  double sigma_hat = 0.0;       // binomial std of the rate at p = min(tail_bound, 1)
  // Same statistics with the realized ||u||^2 in place of E||u||^2.
  double relative_mean = 0.0;
  double relative_violation_rate = 0.0;
  std::size_t trials = 0;
};

/// ||P_k u||^2 for u independent of the n x k block H_k, both drawn from
/// `kind`. E||u||^2 = 1 for both ensembles.
inline ProjectorConcentration projector_concentration_trial(std::size_t n, std::size_t k,
                                                            EnsembleKind kind,
                                                            std::size_t trials, double eps,
                                                            std::uint64_t seed) {
  if (k < 1 || k > n) throw InvalidParam("need 1 <= k <= n");
  if (trials < 1) throw InvalidParam("trials must be positive");
  const double tail = 2.0 * std::exp(-static_cast<double>(k) * c0(eps));
  const double expected = static_cast<double>(k) / static_cast<double>(n);

  double sum = 0.0, rel_sum = 0.0;
  std::size_t violations = 0, rel_violations = 0;
  Matrix Hk(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Matrix u(static_cast<Eigen::Index>(n), 1);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, StreamRole::Probe, 0, t));
    fill_ensemble(rng, kind, Hk);
    fill_ensemble(rng, kind, u);
    // Orthonormal basis of range(H_k); rank-revealing so that singular
    // Bernoulli draws still project onto the true column span.
    Eigen::ColPivHouseholderQR<Matrix> qr(Hk);
    const Eigen::Index rank = qr.rank();
    const Matrix Q = qr.householderQ() * Matrix::Identity(Hk.rows(), rank);
    const double ratio = (Q.transpose() * u).squaredNorm();
    const double rel = ratio / u.squaredNorm();
    sum += ratio;
    rel_sum += rel;
    if (std::abs(ratio - expected) > eps * expected) ++violations;
    if (std::abs(rel - expected) > eps * expected) ++rel_violations;
  }

  ProjectorConcentration out;
  out.trials = trials;
  out.expected = expected;
  out.empirical_mean = sum / static_cast<double>(trials);
  out.violation_rate = static_cast<double>(violations) / static_cast<double>(trials);
  out.relative_mean = rel_sum / static_cast<double>(trials);
  out.relative_violation_rate =
      static_cast<double>(rel_violations) / static_cast<double>(trials);
  out.tail_bound = tail;
  const double p = std::min(tail, 1.0);
  out.sigma_hat = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return out;
}

struct SigmaConcentration {
  double violation_rate = 0.0;  // fraction with sigma_min outside [1 - delta, 1 + delta]
  double tail_bound = 0.0;      // 2 (12/delta)^k exp(-n c0(delta/2))
  bool applicable = false;      // tail_bound <= 1
  double min_sigma = 0.0;
  double max_sigma = 0.0;
  std::size_t trials = 0;
};

/// Smallest singular value of n x k random blocks against the two-sided
/// concentration window. sigma_min is taken from the k x k Gram matrix.
inline SigmaConcentration singular_value_concentration_trial(std::size_t n, std::size_t k,
                                                             EnsembleKind kind,
                                                             std::size_t trials, double delta,
                                                             std::uint64_t seed) {
  if (k < 1 || k > n) throw InvalidParam("need 1 <= k <= n");
  if (trials < 1) throw InvalidParam("trials must be positive");
  SigmaConcentration out;
  out.trials = trials;
  out.tail_bound = sigma_concentration_tail(n, k, delta);
  out.applicable = out.tail_bound <= 1.0;
  out.min_sigma = std::numeric_limits<double>::infinity();
  out.max_sigma = 0.0;

  std::size_t violations = 0;
  Matrix Hk(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, StreamRole::Matrix, 0, t));
    fill_ensemble(rng, kind, Hk);
    const Matrix G = Hk.transpose() * Hk;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
    const double s = std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
    out.min_sigma = std::min(out.min_sigma, s);
    out.max_sigma = std::max(out.max_sigma, s);
    if (s < 1.0 - delta || s > 1.0 + delta) ++violations;
  }
  out.violation_rate = static_cast<double>(violations) / static_cast<double>(trials);
  return out;
}

}  // namespace olsrec
