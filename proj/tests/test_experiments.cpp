#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "olsrec/experiments.hpp"

using namespace olsrec;

namespace {

ExperimentGrid small_grid() {
  ExperimentGrid g;
  g.n = {12, 24};
  g.m = {32};
  g.k = {2};
  g.eps_eta = {0.0, 0.05};
  g.trials_per_cell = 30;
  g.master_seed = 11;
  g.solver = SolverChoice::Both;
  g.unit_columns = true;
  return g;
}

bool same(const CellResult& a, const CellResult& b) {
  return a.cell.index == b.cell.index && a.success_count == b.success_count &&
         a.omp_success_count == b.omp_success_count &&
         a.erc.certified_success == b.erc.certified_success &&
         a.erc.certified_failure == b.erc.certified_failure &&
         a.t1_consistent.certified_success == b.t1_consistent.certified_success &&
         a.t1_literal.certified_success == b.t1_literal.certified_success;
}

}  // namespace

TEST(Grid, CellOrderAndCount) {
  const ExperimentGrid g = small_grid();
  const auto cells = g.cells();
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(g.trial_total(), 120u);
  EXPECT_EQ(cells[0].n, 12u);
  EXPECT_EQ(cells[1].n, 24u);
  EXPECT_EQ(cells[2].eps_eta, 0.05);
  for (std::size_t i = 0; i < cells.size(); ++i) EXPECT_EQ(cells[i].index, i);
}

TEST(Grid, Validation) {
  ExperimentGrid g = small_grid();
  g.n.clear();
  try {
    g.validate();
    FAIL();
  } catch (const InvalidExperiment& e) {
    EXPECT_NE(std::string(e.what()).find("empty grid"), std::string::npos);
  }
  g = small_grid();
  g.k = {40};
  EXPECT_THROW(g.validate(), InvalidExperiment);
  g = small_grid();
  g.budget = 100;
  EXPECT_THROW(run_phase_transition(g, 1), BudgetExceeded);
}

TEST(Statistics, WilsonInterval) {
  const Interval ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.low, 0.4038, 1e-4);
  EXPECT_NEAR(ci.high, 0.5962, 1e-4);
  const Interval all = wilson_interval(20, 20);
  EXPECT_NEAR(all.high, 1.0, 1e-15);
  EXPECT_LT(all.low, 1.0);
  EXPECT_NEAR(binomial_sigma(0.5, 100), 0.05, 1e-15);
  EXPECT_EQ(binomial_sigma(1.5, 100), 0.0);
}

TEST(ParallelMap, OrderIndependentOfThreads) {
  const auto a = parallel_map<std::size_t>(1000, 1, [](std::size_t i) { return i * i; });
  const auto b = parallel_map<std::size_t>(1000, 7, [](std::size_t i) { return i * i; });
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_map<int>(10, 3,
                                 [](std::size_t i) -> int {
                                   if (i == 5) throw InvalidParam("boom");
                                   return 0;
                                 }),
               InvalidParam);
}

TEST(PhaseTransition, DeterministicAcrossThreadCounts) {
  const ExperimentGrid g = small_grid();
  const auto a = run_phase_transition(g, 1);
  const auto b = run_phase_transition(g, 4);
  const auto c = run_phase_transition(g, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same(a[i], b[i]));
    EXPECT_TRUE(same(b[i], c[i]));
  }
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(PhaseTransition, OrthonormalCompleteBasisAlwaysSucceeds) {
  ExperimentGrid g;
  g.n = {20};
  g.m = {20};
  g.k = {5};
  g.trials_per_cell = 50;
  g.orthonormalize = true;
  const auto r = run_phase_transition(g, 2);
  EXPECT_EQ(r[0].success_count, 50u);
}

TEST(PhaseTransition, SuccessTrendsUpInN) {
  ExperimentGrid g;
  g.n = {10, 20, 30, 40, 50, 60, 70, 80};
  g.m = {128};
  g.k = {4};
  g.trials_per_cell = 100;
  g.certificates = false;
  g.master_seed = 3;
  const auto r = run_phase_transition(g);
  for (std::size_t i = 1; i < r.size(); ++i)
    EXPECT_GE(r[i].success_rate(), r[i - 1].success_rate() - 0.02 - 3 * binomial_sigma(r[i].success_rate(), 100));
  EXPECT_GT(r.back().success_rate(), r.front().success_rate());
}

TEST(PhaseTransition, ErcCertifiedNoiselessTrialsSucceed) {
  ExperimentGrid g;
  g.n = {30, 50};
  g.m = {100};
  g.k = {2, 3};
  g.trials_per_cell = 60;
  g.master_seed = 5;
  for (const auto& r : run_phase_transition(g)) {
    EXPECT_EQ(r.erc.violations(), 0u);
    EXPECT_GT(r.erc.certified(), 0u);
  }
}

TEST(BoundComparison, VacuousCellsFlagged) {
  ExperimentGrid g;
  g.n = {40};
  g.m = {64};
  g.k = {3};
  g.eps_eta = {0.0};
  g.trials_per_cell = 20;
  g.bound = BoundSettings{0.5, 0.5, 1.0};
  const auto rows = run_bound_comparison(g, 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].vacuous);
  EXPECT_TRUE(rows[0].dominance);
  ASSERT_TRUE(rows[0].erc_dominance.has_value());
  EXPECT_TRUE(*rows[0].erc_dominance);
}

TEST(BoundComparison, HypothesisEnforced) {
  ExperimentGrid g;
  g.n = {40};
  g.m = {64};
  g.k = {3};
  g.eps_eta = {0.2};
  g.bound = BoundSettings{0.5, 0.5, 10.0};
  EXPECT_THROW(run_bound_comparison(g, 1), InvalidExperiment);
  g.bound.reset();
  EXPECT_THROW(run_bound_comparison(g, 1), InvalidExperiment);
}

TEST(BoundComparison, NonVacuousCellDominates) {
  ExperimentGrid g;
  g.n = {1000};
  g.m = {100};
  g.k = {1};
  g.eps_eta = {0.005};
  g.trials_per_cell = 100;
  g.bound = BoundSettings{0.3, 0.5, 100.0};
  g.certificates = false;
  const auto rows = run_bound_comparison(g);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].vacuous);
  EXPECT_GT(rows[0].bound, 0.2);
  EXPECT_TRUE(rows[0].dominance);
}

TEST(CertificateSoundness, NoConsistentViolations) {
  ExperimentGrid g;
  g.n = {40};
  g.m = {80};
  g.k = {2, 3};
  g.eps_eta = {0.0, 0.02, 0.1};
  g.trials_per_cell = 80;
  g.unit_columns = true;
  const SoundnessTable t = run_certificate_soundness(g);
  EXPECT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.erc_total.violations(), 0u);
  EXPECT_EQ(t.consistent_total.violations(), 0u);
  EXPECT_GT(t.consistent_total.certified(), 0u);
}

TEST(LemmaSuite, PassesAtDefaultSizes) {
  LemmaSizes sizes;
  sizes.noisy_runs = 100;
  sizes.probe_trials = 4000;
  const LemmaReport rep = run_lemma_suite(1, sizes);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.measured;
  EXPECT_TRUE(rep.all_passed());
}

TEST(Decomposition, ErrorsWithinTolerance) {
  const DecompositionErrors e = decomposition_errors(40, 80, 4, 50, 0.1, 9);
  EXPECT_GT(e.iterations_checked, 50u);
  EXPECT_LE(e.max_pythagorean, 1e-8);
  EXPECT_LE(e.max_identity, 1e-8);
  EXPECT_LE(e.max_path, 1e-8);
}

TEST(Csv, HeaderAndFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::nan("")), "NA");
  ExperimentGrid g = small_grid();
  g.trials_per_cell = 5;
  std::ostringstream os;
  write_csv(os, run_phase_transition(g, 1));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kCsvHeader);
  const std::string header = kCsvHeader;
  const auto commas = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), commas);
  }
  EXPECT_EQ(rows, 4);
}
