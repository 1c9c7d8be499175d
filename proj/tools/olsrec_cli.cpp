// olsrec command-line front end: solve, erc, bound, experiment, lemmas, draw.
//
// Exit codes: 0 success, 1 usage or input/output problem, 2 numerical or
// solver failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "olsrec/io.hpp"
#include "olsrec/olsrec.hpp"

using namespace olsrec;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OLSREC_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw IoError(std::string("OLSREC_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// JSON to `path`, or stdout when the path is empty.
void emit_json(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

std::string one_based(const IndexList& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? " " : "") + std::to_string(idx[i] + 1);
  return s;
}

/// Parses "1,4,7" (1-based) into 0-based indices.
IndexList parse_index_list(const std::string& text, const std::string& what) {
  IndexList out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 1)
      throw IoError(what + ": '" + tok + "' is not a 1-based index");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ols" || s == "OLS") return Algorithm::OLS;
  if (s == "omp" || s == "OMP") return Algorithm::OMP;
  if (s == "exhaustive" || s == "EXHAUSTIVE") return Algorithm::Exhaustive;
  throw IoError("unknown algorithm '" + s + "'");
}

// solve ------------------------------------------------------------------------

struct SolveArgs {
  std::string matrix, measurements, output, algorithm = "ols";
  std::size_t k = 0;
  std::optional<std::size_t> max_iters;
  std::optional<double> residual_stop;
  bool normalize = false;
};

int cmd_solve(const SolveArgs& a) {
  const Matrix H = read_matrix_file(a.matrix);
  const Vector y = read_vector_file(a.measurements);
  if (y.size() != H.rows())
    throw InvalidInstance("measurements have length " + std::to_string(y.size()) + " but " +
                          a.matrix + " is " + std::to_string(H.rows()) + "x" +
                          std::to_string(H.cols()));
  const MeasurementInstance inst{H, y, std::nullopt, std::nullopt, a.k};
  SolverOptions opts;
  opts.max_iters = a.max_iters;
  opts.residual_stop = a.residual_stop;
  opts.normalize_columns = a.normalize;
  SolverTrace trace;
  switch (parse_algorithm(a.algorithm)) {
    case Algorithm::OLS: trace = ols_solve(inst, opts); break;
    case Algorithm::OMP: trace = omp_solve(inst, opts); break;
    case Algorithm::Exhaustive: trace = exhaustive_l0(inst); break;
  }
  emit_json(trace_to_json(trace), a.output);
  if (!a.output.empty()) {
    std::cout << "algorithm: " << to_string(trace.algorithm) << "\n"
              << "selected (1-based, in order): " << one_based(trace.selected) << "\n"
              << "final residual norm: " << format_double(trace.residual_norms.back()) << "\n";
  }
  return kExitOk;
}

// erc ----------------------------------------------------------------------------

struct ErcArgs {
  std::string matrix, support, path, trace, measurements, beta, output;
  std::optional<double> eps_eta;
};

int cmd_erc(const ErcArgs& a) {
  const Matrix H = read_matrix_file(a.matrix);
  const IndexList S = parse_index_list(a.support, "--support");
  for (auto j : S)
    if (j >= static_cast<std::size_t>(H.cols()))
      throw IoError("--support index " + std::to_string(j + 1) + " exceeds m = " +
                    std::to_string(H.cols()));

  // Path source: explicit list, a trace file, or an OLS run on the measurements.
  IndexList selected;
  std::string source = "empty";
  if (!a.path.empty()) {
    selected = parse_index_list(a.path, "--path");
    source = "path";
  } else if (!a.trace.empty()) {
    selected = trace_selection_from_json(read_json_file(a.trace));
    source = "trace";
  } else if (!a.measurements.empty()) {
    const Vector y = read_vector_file(a.measurements);
    if (y.size() != H.rows()) throw InvalidInstance("measurements do not match the matrix rows");
    selected = ols_solve({H, y, std::nullopt, std::nullopt, S.size()}).selected;
    source = "ols";
  }
  const IndexList path = true_prefix(selected, S);
  const ErcReport rep = erc_ols_path(H, S, path);

  json out = erc_to_json(rep);
  out["support"] = S;
  out["path_source"] = source;
  out["selected"] = selected;
  const double sigma = spectral_extremes(select_columns(H, S)).sigma_min;
  out["sigma_min"] = sigma;
  if (rep.m_omp < 1.0) out["weaker_than_omp_condition"] = remark1_holds(sigma, rep.m_omp);

  if (!a.beta.empty()) {
    if (!a.eps_eta) throw IoError("--beta needs --eps-eta");
    const Vector beta = read_vector_file(a.beta);
    if (beta.size() != H.cols()) throw InvalidInstance("beta does not match the matrix columns");
    json verdicts = json::array();
    for (double M : rep.m_ols_per_iter) {
      if (M < 1.0)
        verdicts.push_back(verdict_to_json(theorem1_verdict(beta_min_on(beta, S), *a.eps_eta, sigma, M)));
      else
        verdicts.push_back({{"M", M}, {"applicable", false}});
    }
    out["noisy_verdicts"] = verdicts;
  }
  emit_json(out, a.output);
  if (!a.output.empty()) {
    std::cout << "M_OMP: " << format_double(rep.m_omp) << "\n";
    for (std::size_t i = 0; i < rep.m_ols_per_iter.size(); ++i)
      std::cout << "M_" << i + 1 << ": " << format_double(rep.m_ols_per_iter[i])
                << (rep.erc_holds[i] ? " (holds)" : " (fails)") << "\n";
    std::cout << "path (1-based): " << one_based(path) << "\n";
  }
  return kExitOk;
}

// bound ----------------------------------------------------------------------------

struct BoundArgs {
  std::string input, output, fit;
  std::size_t n = 0, m = 0, k = 0;
  double eps = 0.5, delta = 0.5, t = 1.0;
  std::optional<double> gamma, C1, C2, C3;
  double target = 0.95;
};

json fit_constants(const std::string& csv_path, double gamma, double target) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(csv_path, 1, "empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ParseError(csv_path, 1, "missing column '" + name + "'");
  };
  const std::size_t cn = column("n"), cm = column("m"), ck = column("k"), cr = column("success_rate");
  // smallest n reaching the target rate for each (m, k)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> first;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) f.push_back(col);
    if (f.size() != header.size()) throw ParseError(csv_path, lineno, "wrong number of fields");
    try {
      const std::size_t n = std::stoul(f[cn]), m = std::stoul(f[cm]), k = std::stoul(f[ck]);
      const double rate = std::stod(f[cr]);
      auto key = std::make_pair(m, k);
      if (rate >= target && (!first.count(key) || n < first[key])) first[key] = n;
    } catch (const std::exception&) {
      throw ParseError(csv_path, lineno, "unreadable numeric field");
    }
  }
  json fits = json::array();
  for (const auto& [key, n] : first)
    fits.push_back({{"m", key.first},
                    {"k", key.second},
                    {"n_at_target", n},
                    {"C1_effective", calibrate_c1(key.second, key.first, gamma, n)}});
  return {{"target_success_rate", target}, {"gamma", gamma}, {"fits", fits}};
}

int cmd_bound(BoundArgs a) {
  if (!a.fit.empty()) {
    emit_json(fit_constants(a.fit, a.gamma.value_or(0.1), a.target), a.output);
    return kExitOk;
  }
  if (!a.input.empty()) {
    const json j = read_json_file(a.input);
    if (!j.is_object()) throw SchemaError("", "expected a JSON object");
    for (const auto& [key, v] : j.items()) {
      const std::string ptr = "/" + key;
      if (key == "n") a.n = detail::parse_count(v, ptr);
      else if (key == "m") a.m = detail::parse_count(v, ptr);
      else if (key == "k") a.k = detail::parse_count(v, ptr);
      else if (key == "eps") a.eps = detail::parse_real(v, ptr);
      else if (key == "delta") a.delta = detail::parse_real(v, ptr);
      else if (key == "t") a.t = detail::parse_real(v, ptr);
      else if (key == "gamma") a.gamma = detail::parse_real(v, ptr);
      else if (key == "C1") a.C1 = detail::parse_real(v, ptr);
      else if (key == "C2") a.C2 = detail::parse_real(v, ptr);
      else if (key == "C3") a.C3 = detail::parse_real(v, ptr);
      else throw SchemaError(ptr, "unknown key");
    }
  }
  if (a.n == 0 || a.m == 0 || a.k == 0) throw IoError("n, m and k are required");
  const BoundParams p{a.n, a.m, a.k, a.eps, a.delta, a.t};
  json out = bound_to_json(p, theorem2_bound(p));
  out["c0_eps"] = c0(p.eps);
  out["c1_eps"] = c1(p.eps);
  out["snr_requirement"] = snr_requirement(p.k, p.delta, p.t);
  if (a.gamma || a.C1 || a.C2 || a.C3) {
    if (!(a.gamma && a.C1 && a.C2 && a.C3))
      throw IoError("sample complexity needs gamma, C1, C2 and C3 together");
    const ComplexityParams c{*a.gamma, *a.C1, *a.C2, *a.C3};
    const ComplexityTerms terms = sample_complexity_terms(p.k, p.m, c);
    out["sample_complexity"] = {{"gamma", c.gamma},
                                {"C1", c.C1},
                                {"C2", c.C2},
                                {"C3", c.C3},
                                {"log_branch", terms.log_branch},
                                {"linear_branch", terms.linear_branch},
                                {"n", sample_complexity(p.k, p.m, c)}};
  }
  emit_json(out, a.output);
  return kExitOk;
}

// experiment -----------------------------------------------------------------------

struct ExperimentArgs {
  std::string config, output;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  bool timing = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  const json raw = read_json_file(a.config);
  ExperimentConfig cfg = parse_experiment_config(raw);
  if (a.seed)
    cfg.grid.master_seed = *a.seed;
  else if (!raw.contains("master_seed"))
    cfg.grid.master_seed = default_seed();
  if (a.timing) cfg.grid.record_timing = true;
  cfg.grid.validate();

  if (a.dry_run) {
    check_budget(cfg.grid);
    std::cout << "mode: " << to_string(cfg.mode) << "\n"
              << "cells: " << cfg.grid.cell_count() << "\n"
              << "trials per cell: " << cfg.grid.trials_per_cell << "\n"
              << "estimated trial total: " << cfg.grid.trial_total() << "\n";
    return kExitOk;
  }

  const std::string csv_path =
      a.output.empty() ? fs::path(a.config).stem().string() + ".csv" : a.output;
  const std::size_t threads = a.threads.value_or(default_threads());

  std::vector<CellResult> results;
  std::ostringstream summary;
  switch (cfg.mode) {
    case ExperimentMode::PhaseTransition:
      results = run_phase_transition(cfg.grid, threads);
      break;
    case ExperimentMode::BoundComparison: {
      std::size_t violations = 0, informative = 0;
      for (const BoundComparisonRow& row : run_bound_comparison(cfg.grid, threads)) {
        results.push_back(row.result);
        if (!row.vacuous) ++informative;
        if (!row.dominance) ++violations;
      }
      summary << "non-vacuous cells: " << informative << ", dominance violations: " << violations
              << "\n";
      break;
    }
    case ExperimentMode::CertificateSoundness: {
      cfg.grid.certificates = true;
      results = run_phase_transition(cfg.grid, threads);
      std::size_t erc = 0, consistent = 0, literal = 0;
      for (const CellResult& r : results) {
        erc += r.erc.violations();
        consistent += r.t1_consistent.violations();
        literal += r.t1_literal.violations();
      }
      summary << "erc violations: " << erc << ", consistent violations: " << consistent
              << ", literal violations: " << literal << "\n";
      break;
    }
  }

  std::ostringstream csv;
  write_csv(csv, results);
  write_text(csv_path, csv.str());
  const fs::path manifest_path = fs::path(csv_path).replace_extension(".manifest.json");
  write_text(manifest_path.string(),
             make_manifest(cfg, fs::path(csv_path).filename().string()).dump(2) + "\n");
  std::cout << "wrote " << csv_path << " (" << results.size() << " cells) and "
            << manifest_path.string() << "\n"
            << summary.str();
  return kExitOk;
}

// lemmas ---------------------------------------------------------------------------

struct LemmaArgs {
  std::optional<std::uint64_t> seed;
  LemmaSizes sizes;
  std::string output;
};

int cmd_lemmas(const LemmaArgs& a) {
  const LemmaReport rep = run_lemma_suite(a.seed.value_or(default_seed()), a.sizes);
  emit_json(lemma_report_to_json(rep), a.output);
  if (!a.output.empty())
    for (const auto& c : rep.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.measured)
                << " (threshold " << format_double(c.threshold) << ")\n";
  return rep.all_passed() ? kExitOk : kExitNumerical;
}

// draw -----------------------------------------------------------------------------

struct DrawArgs {
  std::string kind = "GAUSSIAN", law = "CONSTANT", noise = "EXACT_NORM", prefix = "instance";
  std::size_t n = 0, m = 0, k = 1;
  double beta_min = 1.0, eps_eta = 0.0;
  std::optional<std::uint64_t> seed;
  bool unit_columns = false;
};

int cmd_draw(const DrawArgs& a) {
  const std::uint64_t seed = a.seed.value_or(default_seed());
  const EnsembleKind kind = detail::parse_ensemble(json(a.kind), "--kind");
  const MagnitudeLaw law = detail::parse_law(json(a.law), "--law");
  const NoiseMode mode = detail::parse_enum<NoiseMode>(
      json(a.noise), "--noise",
      {{"EXACT_NORM", NoiseMode::ExactNorm},
       {"UNIFORM_BALL", NoiseMode::UniformBall},
       {"GAUSSIAN_CLIPPED", NoiseMode::GaussianClipped}});
  const Matrix H = draw_matrix(EnsembleSpec{kind, a.n, a.m, derive_seed(seed, StreamRole::Matrix), a.unit_columns});
  const SparseSignal s = draw_signal({a.m, a.k, a.beta_min, law, SignLaw::Random,
                                      derive_seed(seed, StreamRole::Signal)});
  const Vector eta = draw_noise({a.n, a.eps_eta, mode, derive_seed(seed, StreamRole::Noise)});
  const MeasurementInstance inst = make_instance(H, s.beta, eta, a.k);

  auto dump = [](const Matrix& A, bool column_major) {
    std::ostringstream os;
    write_matrix(os, A, column_major);
    return os.str();
  };
  write_text(a.prefix + ".H.txt", dump(inst.H, true));
  write_text(a.prefix + ".y.txt", dump(inst.y, false));
  write_text(a.prefix + ".beta.txt", dump(*inst.beta_true, false));
  const json meta = {{"ensemble", to_string(kind)},
                     {"n", a.n},
                     {"m", a.m},
                     {"k", a.k},
                     {"seed", seed},
                     {"unit_columns", a.unit_columns},
                     {"magnitude_law", to_string(law)},
                     {"beta_min", a.beta_min},
                     {"noise_mode", to_string(mode)},
                     {"eps_eta", a.eps_eta},
                     {"index_base", 0},
                     {"support", s.support}};
  write_text(a.prefix + ".json", meta.dump(2) + "\n");
  std::cout << "support (1-based): " << one_based(s.support) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery by orthogonal least squares and matching pursuit"};
  app.set_version_flag("--version", std::string(OLSREC_VERSION));
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run a greedy solver on a matrix and measurements");
  s->add_option("-H,--matrix", solve.matrix, "Matrix file")->required();
  s->add_option("-y,--measurements", solve.measurements, "Measurement vector file")->required();
  s->add_option("-k,--sparsity", solve.k, "Sparsity level k")->required();
  s->add_option("-a,--algorithm", solve.algorithm, "ols, omp or exhaustive")->capture_default_str();
  s->add_option("--max-iters", solve.max_iters, "Iteration cap (default k)");
  s->add_option("--residual-stop", solve.residual_stop, "Stop once the residual norm is at most this");
  s->add_flag("--normalize", solve.normalize, "Rescale columns to unit norm before solving");
  s->add_option("-o,--output", solve.output, "Trace JSON path (default stdout)");

  ErcArgs erc;
  auto* e = app.add_subcommand("erc", "Exact-recovery constants along a path of true indices");
  e->add_option("-H,--matrix", erc.matrix, "Matrix file")->required();
  e->add_option("-S,--support", erc.support, "True support, 1-based, comma separated")->required();
  auto* path_opt = e->add_option("--path", erc.path, "Selection order, 1-based, comma separated");
  auto* trace_opt = e->add_option("--trace", erc.trace, "Trace JSON from 'solve'");
  e->add_option("-y,--measurements", erc.measurements, "Run OLS on these measurements for the path");
  e->add_option("--beta", erc.beta, "Coefficient vector for the noisy verdicts");
  e->add_option("--eps-eta", erc.eps_eta, "Noise budget for the noisy verdicts");
  e->add_option("-o,--output", erc.output, "Report JSON path (default stdout)");
  path_opt->excludes(trace_opt);

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "Evaluate the success-probability bound");
  b->add_option("-i,--input", bound.input, "JSON file with n, m, k, eps, delta, t (and optional gamma, C1..C3)");
  b->add_option("-n", bound.n, "Measurements");
  b->add_option("-m", bound.m, "Dictionary size");
  b->add_option("-k", bound.k, "Sparsity");
  b->add_option("--eps", bound.eps, "eps in (0, 1)")->capture_default_str();
  b->add_option("--delta", bound.delta, "delta in (0, 1)")->capture_default_str();
  b->add_option("--t", bound.t, "t > 0")->capture_default_str();
  b->add_option("--gamma", bound.gamma, "Failure probability for the sample complexity");
  b->add_option("--C1", bound.C1, "Constant C1");
  b->add_option("--C2", bound.C2, "Constant C2");
  b->add_option("--C3", bound.C3, "Constant C3");
  b->add_option("--fit", bound.fit, "Experiment CSV: calibrate an effective C1 from the phase transition");
  b->add_option("--target", bound.target, "Success rate defining the transition for --fit")->capture_default_str();
  b->add_option("-o,--output", bound.output, "Result JSON path (default stdout)");

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run a Monte Carlo grid and write CSV plus manifest");
  x->add_option("config", exp.config, "Grid configuration JSON")->required();
  x->add_option("-o,--output", exp.output, "CSV path (default <config stem>.csv)");
  x->add_option("-j,--threads", exp.threads, "Worker threads (default: all cores)");
  x->add_option("--seed", exp.seed, "Override master_seed");
  x->add_flag("--dry-run", exp.dry_run, "Print the cell count and trial total only");
  x->add_flag("--timing", exp.timing, "Record mean runtime per cell (output no longer reproducible)");

  LemmaArgs lem;
  auto* l = app.add_subcommand("lemmas", "Run the interlacing, decomposition and concentration suites");
  l->add_option("--seed", lem.seed, "Seed (default OLSREC_SEED or 0)");
  l->add_option("-n", lem.sizes.n, "Rows")->capture_default_str();
  l->add_option("-m", lem.sizes.m, "Columns")->capture_default_str();
  l->add_option("-k", lem.sizes.k, "Sparsity")->capture_default_str();
  l->add_option("--runs", lem.sizes.noisy_runs, "Noisy runs for the decomposition")->capture_default_str();
  l->add_option("--probes", lem.sizes.probe_trials, "Trials per ensemble for concentration")->capture_default_str();
  l->add_option("-o,--output", lem.output, "Report JSON path (default stdout)");

  DrawArgs draw;
  auto* d = app.add_subcommand("draw", "Write a random instance as text files plus JSON metadata");
  d->add_option("-n", draw.n, "Rows")->required();
  d->add_option("-m", draw.m, "Columns")->required();
  d->add_option("-k", draw.k, "Sparsity")->capture_default_str();
  d->add_option("--kind", draw.kind, "GAUSSIAN or BERNOULLI")->capture_default_str();
  d->add_option("--law", draw.law, "CONSTANT, UNIFORM_ABOVE_MIN or GAUSSIAN_REJECTED")->capture_default_str();
  d->add_option("--beta-min", draw.beta_min, "Smallest nonzero magnitude")->capture_default_str();
  d->add_option("--eps-eta", draw.eps_eta, "Noise budget")->capture_default_str();
  d->add_option("--noise", draw.noise, "EXACT_NORM, UNIFORM_BALL or GAUSSIAN_CLIPPED")->capture_default_str();
  d->add_flag("--unit-columns", draw.unit_columns, "Rescale columns to unit norm");
  d->add_option("--seed", draw.seed, "Seed (default OLSREC_SEED or 0)");
  d->add_option("-p,--prefix", draw.prefix, "Output file prefix")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_erc(erc);
    if (*b) return cmd_bound(bound);
    if (*x) return cmd_experiment(exp);
    if (*l) return cmd_lemmas(lem);
    if (*d) return cmd_draw(draw);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.kind() == ErrorKind::Numerical ? kExitNumerical : kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
