#pragma once

// Monte Carlo harness: phase-transition grids, bound-vs-empirical tables,
// certificate soundness sweeps and the lemma validation suite. Work is
// mapped over (cell, trial) pairs on a thread pool and reduced in cell
// order, so results never depend on the thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "olsrec/bounds.hpp"
#include "olsrec/certificates.hpp"
#include "olsrec/ensembles.hpp"
#include "olsrec/instance.hpp"
#include "olsrec/solvers.hpp"

namespace olsrec {

enum class SolverChoice { OLS, OMP, Both };

inline std::string to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::OLS: return "OLS";
    case SolverChoice::OMP: return "OMP";
    case SolverChoice::Both: return "BOTH";
  }
  return "?";
}

struct BoundSettings {
  double eps = 0.5;
  double delta = 0.5;
  double t = 1.0;
};

struct CellCoords {
  std::size_t index = 0;
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  MagnitudeLaw magnitude_law = MagnitudeLaw::Constant;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  double eps_eta = 0.0;
};

struct ExperimentGrid {
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  std::vector<std::size_t> k;
  std::vector<double> eps_eta{0.0};
  std::vector<EnsembleKind> ensembles{EnsembleKind::Gaussian};
  std::vector<MagnitudeLaw> magnitude_laws{MagnitudeLaw::Constant};
  std::size_t trials_per_cell = 200;
  std::uint64_t master_seed = 0;
  SolverChoice solver = SolverChoice::OLS;

  double beta_min = 1.0;
  SignLaw sign_law = SignLaw::Random;
  NoiseMode noise_mode = NoiseMode::ExactNorm;
  bool unit_columns = false;
  bool orthonormalize = false;  // replace H by an orthonormal basis of its range (n >= m)
  bool certificates = true;
  std::optional<BoundSettings> bound;
  bool record_timing = false;
  double budget = 5e9;  // cap on n * m * trials per cell

  std::size_t cell_count() const {
    return n.size() * m.size() * k.size() * eps_eta.size() * ensembles.size() *
           magnitude_laws.size();
  }

  void validate() const {
    if (cell_count() == 0) throw InvalidExperiment("empty grid");
    if (trials_per_cell < 1) throw InvalidExperiment("trials_per_cell must be at least 1");
    if (!(beta_min > 0.0)) throw InvalidExperiment("beta_min must be positive");
    for (auto e : eps_eta)
      if (!(e >= 0.0)) throw InvalidExperiment("eps_eta values must be nonnegative");
    for (auto nn : n)
      for (auto mm : m)
        for (auto kk : k) {
          if (nn < 1 || mm < 1 || kk < 1)
            throw InvalidExperiment("n, m, k must be positive");
          if (kk > nn || kk > mm)
            throw InvalidExperiment("cell n=" + std::to_string(nn) + " m=" + std::to_string(mm) +
                                    " k=" + std::to_string(kk) + " has k > min(n, m)");
          if (orthonormalize && nn < mm)
            throw InvalidExperiment("orthonormalize requires n >= m");
        }
    if (bound) BoundParams{1, 1, 1, bound->eps, bound->delta, bound->t}.validate();
  }

  /// Cells in canonical order: ensemble, magnitude law, m, k, eps_eta, n.
  std::vector<CellCoords> cells() const {
    std::vector<CellCoords> out;
    out.reserve(cell_count());
    for (auto ens : ensembles)
      for (auto law : magnitude_laws)
        for (auto mm : m)
          for (auto kk : k)
            for (auto e : eps_eta)
              for (auto nn : n) {
                CellCoords c;
                c.index = out.size();
                c.ensemble = ens;
                c.magnitude_law = law;
                c.n = nn;
                c.m = mm;
                c.k = kk;
                c.eps_eta = e;
                out.push_back(c);
              }
    return out;
  }

  /// Total solver runs the grid would perform.
  std::size_t trial_total() const { return cell_count() * trials_per_cell; }
};

/// Counts of (certificate verdict, recovery outcome) pairs.
struct Confusion {
  std::size_t certified_success = 0;
  std::size_t certified_failure = 0;  // soundness violations
  std::size_t uncertified_success = 0;
  std::size_t uncertified_failure = 0;

  void add(bool certified, bool success) {
    if (certified)
      ++(success ? certified_success : certified_failure);
    else
      ++(success ? uncertified_success : uncertified_failure);
  }
  std::size_t certified() const { return certified_success + certified_failure; }
  std::size_t violations() const { return certified_failure; }
};

struct CellResult {
  CellCoords cell;
  std::size_t trials = 0;
  std::size_t success_count = 0;  // OLS, or OMP when it is the only solver
  std::optional<std::size_t> omp_success_count;
  Confusion erc;            // noiseless OLS ERC along the path, all prefixes < 1
  Confusion t1_consistent;  // noisy condition, derivation-consistent first term
  Confusion t1_literal;     // noisy condition, printed first term
  double bound_value = std::numeric_limits<double>::quiet_NaN();
  bool bound_vacuous = false;
  std::optional<double> mean_runtime_ms;

  double success_rate() const {
    return static_cast<double>(success_count) / static_cast<double>(trials);
  }
  double rate(std::size_t count) const {
    return static_cast<double>(count) / static_cast<double>(trials);
  }
};

/// One synthetic trial and every outcome the harness records for it.
struct TrialOutcome {
  bool ols_success = false;
  bool omp_success = false;
  bool erc_certified = false;
  bool t1_consistent = false;
  bool t1_literal = false;
  double runtime_ms = 0.0;
};

struct TrialData {
  MeasurementInstance instance;
  IndexList support;
};

/// Wilson score interval for a binomial proportion.
struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96) {
  if (trials == 0) return {};
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nt)) / (1 + z2 / nt);
  const double half = z * std::sqrt(p * (1 - p) / nt + z2 / (4 * nt * nt)) / (1 + z2 / nt);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline double binomial_sigma(double p, std::size_t trials) {
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

/// Draws the instance of one (cell, trial) from disjoint seed streams.
inline TrialData generate_trial(const ExperimentGrid& grid, const CellCoords& cell,
                                std::size_t trial) {
  const std::uint64_t seed = grid.master_seed;
  EnsembleSpec es{cell.ensemble, cell.n, cell.m,
                  derive_seed(seed, StreamRole::Matrix, cell.index, trial), grid.unit_columns};
  Matrix H = draw_matrix(es);
  if (grid.orthonormalize) {
    Eigen::HouseholderQR<Matrix> qr(H);
    H = qr.householderQ() * Matrix::Identity(H.rows(), H.cols());
  }
  SignalSpec ss{cell.m,         cell.k,        grid.beta_min,
                cell.magnitude_law, grid.sign_law,
                derive_seed(seed, StreamRole::Signal, cell.index, trial)};
  SparseSignal sig = draw_signal(ss);
  NoiseSpec ns{cell.n, cell.eps_eta, grid.noise_mode,
               derive_seed(seed, StreamRole::Noise, cell.index, trial)};
  Vector eta = draw_noise(ns);
  TrialData d;
  d.instance = make_instance(std::move(H), std::move(sig.beta), std::move(eta), cell.k);
  d.support = std::move(sig.support);
  return d;
}

/// Certificate verdicts along the true prefix of an OLS path. Numerical
/// breakdowns (degenerate or rank-deficient blocks) count as uncertified.
struct PathCertificates {
  bool erc = false;
  bool t1_consistent = false;
  bool t1_literal = false;
};

inline PathCertificates certify_path(const Matrix& H, const IndexList& support,
                                     const Vector& beta, double eps_eta,
                                     const IndexList& selected) {
  PathCertificates out;
  const IndexList path = true_prefix(selected, support);
  ErcReport erc;
  try {
    erc = erc_ols_path(H, support, path);
  } catch (const Error&) {
    return out;
  }
  out.erc = erc.all_hold();
  if (!out.erc) return out;
  const double sigma = spectral_extremes(select_columns(H, support)).sigma_min;
  const double bmin = beta_min_on(beta, support);
  out.t1_consistent = true;
  out.t1_literal = true;
  for (double M : erc.m_ols_per_iter) {
    try {
      const Theorem1Verdict v = theorem1_verdict(bmin, eps_eta, sigma, M);
      out.t1_consistent = out.t1_consistent && v.holds_consistent;
      out.t1_literal = out.t1_literal && v.holds_literal;
    } catch (const Error&) {
      out.t1_consistent = out.t1_literal = false;
    }
  }
  return out;
}

inline bool exact_support(const SolverTrace& trace, const IndexList& support) {
  return trace.iterations() == support.size() && trace.support() == support;
}

inline TrialOutcome run_trial(const ExperimentGrid& grid, const CellCoords& cell,
                              std::size_t trial) {
  const auto start = std::chrono::steady_clock::now();
  const TrialData d = generate_trial(grid, cell, trial);
  SolverOptions opts;
  opts.record_scores = false;

  TrialOutcome out;
  std::optional<SolverTrace> ols;
  auto attempt = [&](auto&& solve) -> std::optional<SolverTrace> {
    try {
      return solve(d.instance, opts);
    } catch (const NoViableCandidate&) {
      return std::nullopt;
    }
  };
  if (grid.solver != SolverChoice::OMP) {
    ols = attempt([](const auto& i, const auto& o) { return ols_solve(i, o); });
    out.ols_success = ols && exact_support(*ols, d.support);
  }
  if (grid.solver != SolverChoice::OLS) {
    auto omp = attempt([](const auto& i, const auto& o) { return omp_solve(i, o); });
    out.omp_success = omp && exact_support(*omp, d.support);
  }
  if (grid.certificates && ols) {
    const PathCertificates pc = certify_path(d.instance.H, d.support, *d.instance.beta_true,
                                             cell.eps_eta, ols->selected);
    out.erc_certified = pc.erc;
    out.t1_consistent = pc.t1_consistent;
    out.t1_literal = pc.t1_literal;
  }
  const auto stop = std::chrono::steady_clock::now();
  out.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return out;
}

inline std::size_t default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Applies `fn(i)` for i in [0, count) on `threads` workers and stores the
/// results by index.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, Fn&& fn) {
  std::vector<T> out(count);
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

inline void check_budget(const ExperimentGrid& grid) {
  for (const auto& c : grid.cells()) {
    const double work = static_cast<double>(c.n) * static_cast<double>(c.m) *
                        static_cast<double>(grid.trials_per_cell);
    if (work > grid.budget)
      throw BudgetExceeded("cell n=" + std::to_string(c.n) + " m=" + std::to_string(c.m) +
                           " needs " + std::to_string(work) + " > " +
                           std::to_string(grid.budget));
  }
}

inline std::vector<CellResult> run_phase_transition(const ExperimentGrid& grid,
                                                    std::size_t threads = default_threads()) {
  grid.validate();
  check_budget(grid);
  const std::vector<CellCoords> cells = grid.cells();
  const std::size_t T = grid.trials_per_cell;
  const auto outcomes = parallel_map<TrialOutcome>(cells.size() * T, threads, [&](std::size_t i) {
    return run_trial(grid, cells[i / T], i % T);
  });

  std::vector<CellResult> results;
  results.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult r;
    r.cell = cells[c];
    r.trials = T;
    double runtime = 0.0;
    std::size_t omp_successes = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const TrialOutcome& o = outcomes[c * T + t];
      const bool success = grid.solver == SolverChoice::OMP ? o.omp_success : o.ols_success;
      if (success) ++r.success_count;
      if (o.omp_success) ++omp_successes;
      if (grid.certificates && grid.solver != SolverChoice::OMP) {
        r.erc.add(o.erc_certified, o.ols_success);
        r.t1_consistent.add(o.t1_consistent, o.ols_success);
        r.t1_literal.add(o.t1_literal, o.ols_success);
      }
      runtime += o.runtime_ms;
    }
    if (grid.solver != SolverChoice::OLS) r.omp_success_count = omp_successes;
    if (grid.bound) {
      const BoundResult b = theorem2_bound(
          {r.cell.n, r.cell.m, r.cell.k, grid.bound->eps, grid.bound->delta, grid.bound->t});
      r.bound_value = b.total_raw;
      r.bound_vacuous = b.vacuous;
    }
    if (grid.record_timing) r.mean_runtime_ms = runtime / static_cast<double>(T);
    results.push_back(r);
  }
  return results;
}

// Bound comparison -----------------------------------------------------------

struct BoundComparisonRow {
  CellResult result;
  double empirical = 0.0;
  double bound = 0.0;  // total_raw
  double sigma_hat = 0.0;
  bool vacuous = false;
  bool dominance = false;  // empirical >= bound - 3 sigma_hat
  // Noiseless cells: every ERC-certified trial must succeed.
  std::optional<bool> erc_dominance;
};

inline std::vector<BoundComparisonRow> run_bound_comparison(
    const ExperimentGrid& grid, std::size_t threads = default_threads()) {
  if (!grid.bound) throw InvalidExperiment("bound comparison needs bound parameters");
  const BoundSettings& b = *grid.bound;
  for (double e : grid.eps_eta)
    if (grid.beta_min < (1.0 + b.delta + b.t) * e)
      throw InvalidExperiment("beta_min = " + std::to_string(grid.beta_min) +
                              " is below (1 + delta + t) eps_eta for eps_eta = " +
                              std::to_string(e));
  std::vector<BoundComparisonRow> rows;
  for (const CellResult& r : run_phase_transition(grid, threads)) {
    BoundComparisonRow row;
    row.result = r;
    row.empirical = r.success_rate();
    row.bound = r.bound_value;
    row.vacuous = r.bound_vacuous || r.bound_value <= 0.0;
    row.sigma_hat = binomial_sigma(row.bound, r.trials);
    row.dominance = row.vacuous || row.empirical >= row.bound - 3.0 * row.sigma_hat;
    if (r.cell.eps_eta == 0.0 && grid.certificates)
      row.erc_dominance = r.erc.violations() == 0 && r.success_count >= r.erc.certified();
    rows.push_back(row);
  }
  return rows;
}

// Certificate soundness --------------------------------------------------------

struct SoundnessRow {
  CellCoords cell;
  std::size_t trials = 0;
  Confusion erc;
  Confusion t1_consistent;
  Confusion t1_literal;
};

struct SoundnessTable {
  std::vector<SoundnessRow> rows;
  Confusion erc_total;
  Confusion consistent_total;
  Confusion literal_total;
};

inline void accumulate(Confusion& into, const Confusion& c) {
  into.certified_success += c.certified_success;
  into.certified_failure += c.certified_failure;
  into.uncertified_success += c.uncertified_success;
  into.uncertified_failure += c.uncertified_failure;
}

inline SoundnessTable run_certificate_soundness(ExperimentGrid grid,
                                                std::size_t threads = default_threads()) {
  grid.certificates = true;
  if (grid.solver == SolverChoice::OMP) grid.solver = SolverChoice::OLS;
  SoundnessTable table;
  for (const CellResult& r : run_phase_transition(grid, threads)) {
    table.rows.push_back({r.cell, r.trials, r.erc, r.t1_consistent, r.t1_literal});
    accumulate(table.erc_total, r.erc);
    accumulate(table.consistent_total, r.t1_consistent);
    accumulate(table.literal_total, r.t1_literal);
  }
  return table;
}

// Lemma suite ----------------------------------------------------------------

struct LemmaCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

struct LemmaSizes {
  std::size_t n = 64;
  std::size_t m = 128;
  std::size_t k = 8;
  std::size_t partitions = 200;      // interlacing
  std::size_t noisy_runs = 500;      // decomposition
  std::size_t probe_trials = 10000;  // concentration
  double eps = 0.5;
  double noise = 0.1;
};

/// Smallest slack of sigma_min(H_i) >= sigma_min(C) and
/// sigma_max(H_i) <= sigma_max(C) over random column partitions of tall C.
inline double interlacing_min_slack(std::size_t n, std::size_t cols, std::size_t partitions,
                                    std::uint64_t seed) {
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < partitions; ++p) {
    Rng rng(derive_seed(seed, StreamRole::Matrix, 1, p));
    Matrix C(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
    fill_ensemble(rng, EnsembleKind::Gaussian, C);
    const auto split = static_cast<Eigen::Index>(1 + rng.below(cols - 1));
    const SpectralExtremes whole = spectral_extremes(C);
    for (const Matrix& part : {Matrix(C.leftCols(split)), Matrix(C.rightCols(C.cols() - split))}) {
      const SpectralExtremes s = spectral_extremes(part);
      slack = std::min({slack, s.sigma_min - whole.sigma_min, whole.sigma_max - s.sigma_max});
    }
  }
  return slack;
}

struct DecompositionErrors {
  double max_pythagorean = 0.0;  // | ||r||^2 - ||eta_perp||^2 - ||signal||^2 | / ||r||^2
  double max_identity = 0.0;     // ||r - eta_perp - signal|| / ||r||
  double max_path = 0.0;         // solver-path residual norm vs batch recomputation
  std::size_t iterations_checked = 0;
};

/// Checks the noise/residual decomposition at every iteration of noisy OLS
/// runs while the selected set stays inside the true support.
inline DecompositionErrors decomposition_errors(std::size_t n, std::size_t m, std::size_t k,
                                                std::size_t runs, double eps_eta,
                                                std::uint64_t seed) {
  ExperimentGrid g;
  g.n = {n};
  g.m = {m};
  g.k = {k};
  g.eps_eta = {eps_eta};
  g.master_seed = seed;
  g.unit_columns = true;
  const CellCoords cell = g.cells().front();
  DecompositionErrors out;
  for (std::size_t t = 0; t < runs; ++t) {
    const TrialData d = generate_trial(g, cell, t);
    SolverOptions opts;
    opts.record_scores = false;
    const SolverTrace trace = ols_solve(d.instance, opts);
    const IndexList path = true_prefix(trace.selected, d.support);
    for (std::size_t i = 0; i <= path.size() && i <= trace.iterations(); ++i) {
      const std::span<const std::size_t> S_i(path.data(), i);
      const ResidualDecomposition dec = residual_decompose(d.instance, S_i);
      const double r2 = dec.residual.squaredNorm();
      const double split = dec.eta_perp.squaredNorm() + dec.signal_part.squaredNorm();
      const double denom = std::max(r2, std::numeric_limits<double>::min());
      out.max_pythagorean = std::max(out.max_pythagorean, std::abs(r2 - split) / denom);
      out.max_identity =
          std::max(out.max_identity, (dec.residual - dec.eta_perp - dec.signal_part).norm() /
                                         std::sqrt(denom));
      out.max_path = std::max(out.max_path, std::abs(trace.residual_norms[i] - dec.residual.norm()) /
                                                std::sqrt(denom));
      ++out.iterations_checked;
    }
  }
  return out;
}

inline LemmaReport run_lemma_suite(std::uint64_t seed, const LemmaSizes& sizes = {}) {
  LemmaReport rep;

  const std::size_t cols = std::min(sizes.n, 2 * sizes.k);
  const double slack = interlacing_min_slack(sizes.n, std::max<std::size_t>(cols, 2),
                                             sizes.partitions, seed);
  rep.checks.push_back({"interlacing", slack >= -1e-10, slack, -1e-10,
                        "min slack of the singular-value inequalities over column partitions"});

  const DecompositionErrors dec =
      decomposition_errors(sizes.n, sizes.m, sizes.k, sizes.noisy_runs, sizes.noise, seed);
  rep.checks.push_back({"decomposition_pythagorean", dec.max_pythagorean <= 1e-8,
                        dec.max_pythagorean, 1e-8,
                        std::to_string(dec.iterations_checked) + " iterations"});
  rep.checks.push_back({"decomposition_identity", dec.max_identity <= 1e-8, dec.max_identity,
                        1e-8, "residual = eta_perp + projected signal"});

  for (EnsembleKind kind : {EnsembleKind::Gaussian, EnsembleKind::Bernoulli}) {
    const ProjectorConcentration pc = projector_concentration_trial(
        sizes.n, sizes.k, kind, sizes.probe_trials, sizes.eps, seed);
    const double rel = std::abs(pc.empirical_mean - pc.expected) / pc.expected;
    rep.checks.push_back({"concentration_mean_" + to_string(kind), rel <= 0.05, rel, 0.05,
                          "relative error of E||P_k u||^2 against k/n"});
    const double limit = pc.tail_bound + 3.0 * pc.sigma_hat;
    rep.checks.push_back({"concentration_tail_" + to_string(kind), pc.violation_rate <= limit,
                          pc.violation_rate, limit, "violation rate against 2exp(-k c0)"});
  }
  return rep;
}

// CSV ------------------------------------------------------------------------

/// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline const char* kCsvHeader =
    "ensemble,magnitude_law,n,m,k,eps_eta,trials,success_count,omp_success_count,"
    "success_rate,success_ci_low,success_ci_high,bound_value,bound_vacuous,erc_rate,"
    "t1_consistent_rate,t1_literal_rate,t1_consistent_violations,t1_literal_violations,"
    "mean_runtime_ms";

inline void write_csv(std::ostream& os, const std::vector<CellResult>& results) {
  os << kCsvHeader << '\n';
  for (const CellResult& r : results) {
    const Interval ci = wilson_interval(r.success_count, r.trials);
    os << to_string(r.cell.ensemble) << ',' << to_string(r.cell.magnitude_law) << ','
       << r.cell.n << ',' << r.cell.m << ',' << r.cell.k << ',' << format_double(r.cell.eps_eta)
       << ',' << r.trials << ',' << r.success_count << ','
       << (r.omp_success_count ? std::to_string(*r.omp_success_count) : "NA") << ','
       << format_double(r.success_rate()) << ',' << format_double(ci.low) << ','
       << format_double(ci.high) << ',' << format_double(r.bound_value) << ','
       << (r.bound_vacuous ? 1 : 0) << ',' << format_double(r.rate(r.erc.certified())) << ','
       << format_double(r.rate(r.t1_consistent.certified())) << ','
       << format_double(r.rate(r.t1_literal.certified())) << ','
       << r.t1_consistent.violations() << ',' << r.t1_literal.violations() << ','
       << (r.mean_runtime_ms ? format_double(*r.mean_runtime_ms) : "NA") << '\n';
  }
}

}  // namespace olsrec
