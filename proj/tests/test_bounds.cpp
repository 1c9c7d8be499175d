#include <cmath>

#include <gtest/gtest.h>

#include "olsrec/bounds.hpp"
#include "oracles.hpp"

using namespace olsrec;

TEST(C0, ClosedFormValues) {
  EXPECT_NEAR(c0(0.5), 0.0625 - 0.5 * 0.5 * 0.5 / 6.0, 1e-15);
  EXPECT_NEAR(c0(0.5), 0.0416667, 1e-7);
  EXPECT_NEAR(c0(0.9), 0.081, 1e-15);
}

TEST(C0, VanishesNearZero) {
  double prev = c0(0.2);
  for (double e = 0.1; e > 1e-6; e /= 2) {
    const double v = c0(e);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(c0(1e-6), 1e-12);
}

TEST(C0, HighPrecisionAgreement) {
  for (int i = 1; i < 100; ++i) {
    const double e = i / 100.0;
    const long double el = e;
    const long double ref = el * el / 4.0L - el * el * el / 6.0L;
    EXPECT_NEAR(c0(e), static_cast<double>(ref), 1e-14);
    const long double ref1 = std::sqrt((1.0L - el) / (1.0L + el));
    EXPECT_NEAR(c1(e), static_cast<double>(ref1), 1e-14);
  }
}

TEST(C0, OutOfRange) {
  EXPECT_THROW(c0(0.0), InvalidParam);
  EXPECT_THROW(c0(1.0), InvalidParam);
  EXPECT_THROW(c1(-0.1), InvalidParam);
}

TEST(C1, ValuesAndMonotonicity) {
  EXPECT_NEAR(c1(1e-12), 1.0, 1e-11);
  EXPECT_NEAR(c1(0.5), std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(c1(0.5), 0.57735, 1e-5);
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = c1(i / 101.0);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(SuccessBound, KEqualsNBoundaryIsFinite) {
  const BoundResult r = theorem2_bound({5, 10, 5, 0.9, 0.9, 0.1});
  EXPECT_TRUE(std::isfinite(r.p1));
  EXPECT_TRUE(std::isfinite(r.total_raw));
  EXPECT_NEAR(r.p1_base, 1.0 - 2.0 * std::exp(-c0(0.9)), 1e-15);
}

TEST(SuccessBound, DualEvaluation) {
  const BoundResult r = theorem2_bound({2000, 50, 2, 0.1, 0.1, 1.0});
  const long double ref = oracle::success_bound(2000, 50, 2, 0.1L, 0.1L, 1.0L);
  EXPECT_NEAR(r.product_literal, static_cast<double>(ref), 1e-12 * std::abs(static_cast<double>(ref)));
}

TEST(SuccessBound, DualEvaluationNonVacuous) {
  for (std::size_t n : {500, 1000, 2000, 4000}) {
    const BoundResult r = theorem2_bound({n, 100, 1, 0.3, 0.5, 100.0});
    const long double ref = oracle::success_bound(n, 100, 1, 0.3L, 0.5L, 100.0L);
    EXPECT_NEAR(r.total_raw, static_cast<double>(ref), 1e-12);
  }
  const BoundResult r = theorem2_bound({4000, 100, 1, 0.3, 0.5, 100.0});
  EXPECT_FALSE(r.vacuous);
  EXPECT_GT(r.total_raw, 0.9);
}

TEST(SuccessBound, VacuousFlaggedNotHidden) {
  const BoundResult r = theorem2_bound({200, 50, 5, 0.5, 0.5, 1.0});
  EXPECT_TRUE(r.vacuous);
  EXPECT_LE(r.total_raw, 0.0);
  EXPECT_EQ(r.total, 0.0);
  EXPECT_LT(r.p2, 0.0);
}

TEST(SuccessBound, NeverExceedsOne) {
  for (std::size_t n : {10, 50, 200, 1000, 5000, 20000})
    for (std::size_t k : {1, 2, 5})
      for (double eps : {0.1, 0.5, 0.9})
        for (double t : {0.5, 5.0, 100.0}) {
          const BoundResult r = theorem2_bound({n, 100, k, eps, 0.5, t});
          EXPECT_LE(r.total_raw, 1.0);
          EXPECT_LE(r.p1, 1.0);
          EXPECT_LE(r.p2, 1.0);
          EXPECT_LE(r.p3_factor, 1.0);
          EXPECT_GE(r.total, 0.0);
          EXPECT_LE(r.total, 1.0);
        }
}

TEST(SuccessBound, NonDecreasingInN) {
  for (std::size_t k : {1, 2, 3}) {
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 100; n <= 20000; n += 100) {
      const BoundResult r = theorem2_bound({n, 20, k, 0.2, 0.5, 100.0});
      if (!r.vacuous) {
        EXPECT_GE(r.total_raw, prev - 1e-15) << "n = " << n;
        prev = r.total_raw;
      }
    }
  }
}

TEST(SuccessBound, RejectsBadParams) {
  EXPECT_THROW(theorem2_bound({10, 20, 11, 0.5, 0.5, 1.0}), InvalidParam);
  EXPECT_THROW(theorem2_bound({10, 20, 2, 0.5, 1.0, 1.0}), InvalidParam);
  EXPECT_THROW(theorem2_bound({10, 20, 2, 0.5, 0.5, 0.0}), InvalidParam);
}

TEST(Snr, Values) {
  EXPECT_NEAR(snr_requirement(1, 0.0, 1e-12), 1.0, 1e-11);
  EXPECT_NEAR(snr_requirement(4, 0.1, 0.2), 6.76, 1e-13);
  EXPECT_DOUBLE_EQ(snr_requirement(8, 0.3, 2.0), 2.0 * snr_requirement(4, 0.3, 2.0));
}

TEST(SampleComplexity, HandValue) {
  const ComplexityParams c{0.1, 1.0, 1.0, 1.0};
  const ComplexityTerms t = sample_complexity_terms(5, 100, c);
  EXPECT_NEAR(t.log_branch, 10.0 * std::log(1000.0), 1e-12);
  EXPECT_NEAR(t.log_branch, 69.08, 0.01);
  EXPECT_NEAR(t.linear_branch, 5.0 + std::log(1200.0), 1e-12);
  EXPECT_NEAR(t.linear_branch, 12.09, 0.01);
  EXPECT_EQ(sample_complexity(5, 100, c), 70u);
}

TEST(SampleComplexity, LogarithmLaw) {
  const ComplexityParams c{0.1, 1.5, 1.0, 1.0};
  const double a = sample_complexity_terms(3, 50, c).log_branch;
  const double b = sample_complexity_terms(3, 500, c).log_branch;
  EXPECT_NEAR(b - a, 2.0 * 3 * std::log(10.0) / 1.5, 1e-12);
}

TEST(SampleComplexity, Monotone) {
  std::size_t prev = 0;
  for (double gamma = 0.9; gamma > 1e-4; gamma /= 1.5) {
    const std::size_t n = sample_complexity(4, 200, {gamma, 1.0, 1.0, 1.0});
    EXPECT_GE(n, prev);
    prev = n;
  }
  for (std::size_t k = 1; k < 20; ++k)
    EXPECT_LE(sample_complexity(k, 100, {}), sample_complexity(k + 1, 100, {}));
  for (std::size_t m = 10; m < 10000; m *= 2)
    EXPECT_LE(sample_complexity(3, m, {}), sample_complexity(3, 2 * m, {}));
}

TEST(SampleComplexity, Calibration) {
  const double C1 = calibrate_c1(4, 128, 0.1, 78);
  EXPECT_NEAR(sample_complexity_terms(4, 128, {0.1, C1, 1.0, 1.0}).log_branch, 78.0, 1e-10);
  EXPECT_THROW(sample_complexity(3, 10, {0.0, 1, 1, 1}), InvalidParam);
  EXPECT_THROW(sample_complexity(3, 10, {0.5, 0, 1, 1}), InvalidParam);
}
