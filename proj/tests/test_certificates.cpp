#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "olsrec/certificates.hpp"
#include "olsrec/ensembles.hpp"
#include "olsrec/solvers.hpp"
#include "oracles.hpp"

using namespace olsrec;

namespace {

Matrix coherent_triple() {
  Matrix H(2, 3);
  const double s = 1.0 / std::sqrt(2.0);
  H << 1, 0, s, 0, 1, s;
  return H;
}

// M_{i+1} straight from its definition, with projections built by QR.
double erc_by_definition(const Matrix& H, const IndexList& S_opt, const IndexList& S_i) {
  const Matrix P = oracle::batch_complement(oracle::columns(H, S_i));
  Matrix Phi(H.rows(), 0), Psi(H.rows(), 0);
  for (std::size_t j = 0; j < static_cast<std::size_t>(H.cols()); ++j) {
    const bool in_opt = std::find(S_opt.begin(), S_opt.end(), j) != S_opt.end();
    const bool in_sel = std::find(S_i.begin(), S_i.end(), j) != S_i.end();
    if (in_sel) continue;
    const Vector b = (P * H.col(static_cast<Eigen::Index>(j))).normalized();
    Matrix& target = in_opt ? Phi : Psi;
    target.conservativeResize(Eigen::NoChange, target.cols() + 1);
    target.col(target.cols() - 1) = b;
  }
  const Matrix X = Phi.colPivHouseholderQr().solve(Psi);
  return X.cwiseAbs().colwise().sum().maxCoeff();
}

struct Noisy {
  MeasurementInstance inst;
  IndexList support;
};

Noisy noisy_unit_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t k,
                          double eps, double beta_min = 1.0) {
  const Matrix H = draw_matrix({EnsembleKind::Gaussian, n, m, derive_seed(seed, StreamRole::Matrix), true});
  const SparseSignal s = draw_signal({m, k, beta_min, MagnitudeLaw::UniformAboveMin, SignLaw::Random,
                                      derive_seed(seed, StreamRole::Signal)});
  const Vector eta = draw_noise({n, eps, NoiseMode::ExactNorm, derive_seed(seed, StreamRole::Noise)});
  return {make_instance(H, s.beta, eta, k), s.support};
}

}  // namespace

TEST(NormalizedProjectedColumns, UnitColumnsUnchangedWithoutSelection) {
  std::mt19937_64 g(1);
  Matrix H = oracle::gaussian(5, 4, g);
  H.colwise().normalize();
  const Matrix B = normalized_projected_columns(H, {}, IndexList{0, 1, 2, 3});
  EXPECT_LE((B - H).norm(), 1e-14);
}

TEST(NormalizedProjectedColumns, HandProjection) {
  Matrix H(2, 2);
  H << 1, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  const Matrix B = normalized_projected_columns(H, IndexList{0}, IndexList{1});
  EXPECT_NEAR(std::abs(B(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(B(0, 0), 0.0, 1e-14);
}

TEST(NormalizedProjectedColumns, UnitNormAndDegenerate) {
  std::mt19937_64 g(3);
  Matrix H = oracle::gaussian(10, 6, g);
  const Matrix B = normalized_projected_columns(H, IndexList{0, 2}, IndexList{1, 3, 4, 5});
  for (Eigen::Index c = 0; c < B.cols(); ++c) EXPECT_NEAR(B.col(c).norm(), 1.0, 1e-10);
  H.col(5) = H.col(0) - H.col(2);
  try {
    normalized_projected_columns(H, IndexList{0, 2}, IndexList{1, 5});
    FAIL();
  } catch (const DegenerateColumn& e) {
    EXPECT_EQ(e.index(), 5u);
  }
}

TEST(ErcOmp, IdentityIsZero) { EXPECT_EQ(erc_omp(Matrix::Identity(5, 5), IndexList{1, 3}), 0.0); }

TEST(ErcOmp, CoherentTripleFails) {
  EXPECT_NEAR(erc_omp(coherent_triple(), IndexList{0, 1}), std::sqrt(2.0), 1e-14);
}

TEST(ErcOmp, RankDeficientSupport) {
  Matrix H(3, 3);
  H << 1, 2, 0, 0, 0, 1, 0, 0, 0;
  EXPECT_THROW(erc_omp(H, IndexList{0, 1}), RankDeficient);
}

TEST(ErcOmp, GaussianUsuallyCertified) {
  int below = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix H = draw_matrix({EnsembleKind::Gaussian, 50, 100, seed});
    if (erc_omp(H, IndexList{3, 40, 77}) < 1.0) ++below;
  }
  EXPECT_GT(below, 50);
}

TEST(ErcOlsPath, OrthonormalFirstConstantIsZero) {
  const ErcReport r = erc_ols_path(Matrix::Identity(4, 4), IndexList{0, 2}, {});
  ASSERT_EQ(r.m_ols_per_iter.size(), 1u);
  EXPECT_EQ(r.m_ols_per_iter[0], 0.0);
  EXPECT_TRUE(r.erc_holds[0]);
}

TEST(ErcOlsPath, CoherentTripleFirstConstant) {
  const ErcReport r = erc_ols_path(coherent_triple(), IndexList{0, 1}, {});
  EXPECT_NEAR(r.m_ols_per_iter[0], std::sqrt(2.0), 1e-14);
  EXPECT_FALSE(r.erc_holds[0]);
  EXPECT_FALSE(r.all_hold());
}

TEST(ErcOlsPath, MatchesDefinitionOnEveryPrefix) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix H = draw_matrix({EnsembleKind::Gaussian, 30, 60, seed});
    const IndexList S{4, 11, 29, 50};
    const IndexList path{29, 4, 50, 11};
    const ErcReport r = erc_ols_path(H, S, path);
    ASSERT_EQ(r.m_ols_per_iter.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
      const IndexList prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i));
      EXPECT_NEAR(r.m_ols_per_iter[i], erc_by_definition(H, S, prefix), 1e-9);
      EXPECT_EQ(r.erc_holds[i], r.m_ols_per_iter[i] < 1.0);
    }
  }
}

TEST(ErcOlsPath, RejectsPathOutsideSupport) {
  EXPECT_THROW(erc_ols_path(Matrix::Identity(4, 4), IndexList{0, 1}, IndexList{2}), InvalidParam);
}

TEST(ErcOlsPath, SpecializesToOmpWithOrthonormalSupport) {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix H = oracle::gaussian(12, 20, g);
    Eigen::HouseholderQR<Matrix> qr(H.leftCols(3));
    H.leftCols(3) = qr.householderQ() * Matrix::Identity(12, 3);
    H.colwise().normalize();
    const IndexList S{0, 1, 2};
    EXPECT_NEAR(erc_ols_path(H, S, {}).m_ols_per_iter[0], erc_omp(H, S), 1e-12);
  }
}

TEST(SelectionRatio, IdentityIsZero) {
  Vector y = Vector::Zero(5);
  y(1) = 2;
  y(3) = -1;
  EXPECT_EQ(selection_ratio(Matrix::Identity(5, 5), IndexList{1, 3}, {}, y).value, 0.0);
}

TEST(SelectionRatio, ZeroDenominatorIsIndeterminate) {
  EXPECT_THROW(selection_ratio(Matrix::Identity(3, 3), IndexList{0}, {}, Vector::Unit(3, 1)),
               Indeterminate);
  EXPECT_THROW(selection_ratio(Matrix::Identity(3, 3), IndexList{0}, IndexList{0}, Vector::Unit(3, 1)),
               Indeterminate);
}

TEST(SelectionRatio, PredictsNextOlsSelection) {
  int below = 0, above = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto d = noisy_unit_instance(seed, 25, 50, 4, 0.3);
    const auto trace = ols_solve(d.inst);
    const IndexList path = true_prefix(trace.selected, d.support);
    for (std::size_t i = 0; i <= path.size() && i < trace.iterations(); ++i) {
      const IndexList S_i(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i));
      const Vector r = oracle::batch_complement(oracle::columns(d.inst.H, S_i)) * d.inst.y;
      const SelectionRatio rho = selection_ratio(d.inst.H, d.support, S_i, r);
      const bool next_true =
          std::binary_search(d.support.begin(), d.support.end(), trace.selected[i]);
      EXPECT_EQ(rho.value < 1.0, next_true) << "seed " << seed << " iteration " << i;
      (rho.value < 1.0 ? below : above) += 1;
    }
  }
  EXPECT_GT(below, 0);
  EXPECT_GT(above, 0);
}

TEST(SelectionRatio, BoundedByProofChain) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const double eps = 0.05;
    const auto d = noisy_unit_instance(seed, 40, 60, 3, eps);
    const Matrix Hbar = select_columns(d.inst.H, d.support);
    const double sigma = spectral_extremes(Hbar).sigma_min;
    const double bmin = beta_min_on(*d.inst.beta_true, d.support);
    const auto trace = ols_solve(d.inst);
    const IndexList path = true_prefix(trace.selected, d.support);
    const ErcReport rep = erc_ols_path(d.inst.H, d.support, path);
    for (std::size_t i = 0; i < rep.m_ols_per_iter.size() && i <= path.size(); ++i) {
      const double M = rep.m_ols_per_iter[i];
      if (!(M < 1.0)) continue;
      const IndexList S_i(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i));
      const Vector r = oracle::batch_complement(oracle::columns(d.inst.H, S_i)) * d.inst.y;
      const double rho = selection_ratio(d.inst.H, d.support, S_i, r).value;
      EXPECT_LE(rho, selection_ratio_bound(M, eps, sigma, bmin) + 1e-12);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(NoisyVerdict, NoiselessReducesToPositivity) {
  const Theorem1Verdict v = theorem1_verdict(1e-6, 0.0, 0.7, 0.4);
  EXPECT_TRUE(v.holds_consistent);
  EXPECT_TRUE(v.holds_literal);
  EXPECT_EQ(v.rhs_consistent, 0.0);
}

TEST(NoisyVerdict, OrthonormalVariantsCoincide) {
  const Theorem1Verdict v = theorem1_verdict(0.25, 0.1, 1.0, 0.0);
  EXPECT_NEAR(v.rhs_literal, 0.2, 1e-15);
  EXPECT_NEAR(v.rhs_consistent, 0.2, 1e-15);
  EXPECT_TRUE(v.holds_consistent);
  EXPECT_FALSE(theorem1_verdict(0.2, 0.1, 1.0, 0.0).holds_consistent);
}

TEST(NoisyVerdict, HandEvaluatedVariants) {
  const Theorem1Verdict v = theorem1_verdict(1.0, 0.1, 0.5, 0.5);
  // tail = 0.1 / (0.5 * 0.25) = 0.8
  EXPECT_NEAR(v.rhs_literal, 0.05 + 0.8, 1e-15);
  EXPECT_NEAR(v.rhs_consistent, 0.2 + 0.8, 1e-15);
  EXPECT_TRUE(v.holds_literal);
  EXPECT_FALSE(v.holds_consistent);
}

TEST(NoisyVerdict, InapplicableWhenErcFails) {
  EXPECT_THROW(theorem1_verdict(1.0, 0.1, 0.9, 1.0), ConditionInapplicable);
  EXPECT_THROW(theorem1_verdict(1.0, 0.1, 0.0, 0.5), ConditionInapplicable);
}

TEST(NoisyVerdict, CertifiedTrialsRecover) {
  int certified = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const double eps = 0.02;
    const auto d = noisy_unit_instance(seed, 50, 100, 3, eps);
    const auto trace = ols_solve(d.inst);
    const IndexList path = true_prefix(trace.selected, d.support);
    const ErcReport rep = erc_ols_path(d.inst.H, d.support, path);
    if (!rep.all_hold()) continue;
    const auto verdicts = theorem1_check(d.inst.H, d.support, *d.inst.beta_true, eps, rep);
    const bool all = std::all_of(verdicts.begin(), verdicts.end(),
                                 [](const Theorem1Verdict& v) { return v.holds_consistent; });
    if (!all) continue;
    ++certified;
    EXPECT_EQ(trace.support(), d.support) << "seed " << seed;
  }
  EXPECT_GT(certified, 50);
}

TEST(Certificates, ScaleInvariance) {
  const auto d = noisy_unit_instance(21, 40, 80, 3, 0.05);
  const auto trace = ols_solve(d.inst);
  const IndexList path = true_prefix(trace.selected, d.support);
  const ErcReport rep = erc_ols_path(d.inst.H, d.support, path);
  ASSERT_TRUE(rep.all_hold());
  const double c = 7.5;
  const Vector beta2 = c * *d.inst.beta_true;
  const auto a = theorem1_check(d.inst.H, d.support, *d.inst.beta_true, 0.05, rep);
  const auto b = theorem1_check(d.inst.H, d.support, beta2, c * 0.05, rep);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].holds_consistent, b[i].holds_consistent);
    EXPECT_EQ(a[i].holds_literal, b[i].holds_literal);
  }
  const double rho1 = selection_ratio(d.inst.H, d.support, {}, d.inst.y).value;
  const double rho2 = selection_ratio(d.inst.H, d.support, {}, Vector(c * d.inst.y)).value;
  EXPECT_NEAR(rho1, rho2, 1e-12);
}

TEST(OmpComparison, Boundary) { EXPECT_FALSE(remark1_holds(1.0, 0.0)); }

TEST(OmpComparison, HandEvaluation) { EXPECT_TRUE(remark1_holds(0.9, 0.5)); }

TEST(OmpComparison, Inapplicable) {
  EXPECT_THROW(remark1_holds(0.9, 1.0), ConditionInapplicable);
  EXPECT_THROW(remark1_comparison(coherent_triple(), IndexList{0, 1}), ConditionInapplicable);
}

TEST(OmpComparison, GaussianEnsembleMostlyHolds) {
  int applicable = 0, holds = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Matrix H = draw_matrix({EnsembleKind::Gaussian, 100, 200, seed});
    const IndexList S{5, 50, 120, 199};
    if (!(erc_omp(H, S) < 1.0)) continue;
    ++applicable;
    if (remark1_comparison(H, S)) ++holds;
  }
  ASSERT_GT(applicable, 0);
  EXPECT_GE(static_cast<double>(holds) / applicable, 0.5);
}
