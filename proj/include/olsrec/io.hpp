#pragma once

// Text matrix files, JSON serialization of traces, certificates, bounds and
// experiment grids, and the experiment manifest.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "olsrec/bounds.hpp"
#include "olsrec/certificates.hpp"
#include "olsrec/ensembles.hpp"
#include "olsrec/experiments.hpp"
#include "olsrec/solvers.hpp"
#include "olsrec/version.hpp"

namespace olsrec {

using json = nlohmann::json;

/// Input-file problem located at `source:line`.
class ParseError : public Error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorKind::Input, source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Grid/config problem located by a JSON pointer.
class SchemaError : public Error {
public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(ErrorKind::Input, (pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(pointer) {}

  const std::string& pointer() const noexcept { return pointer_; }

private:
  std::string pointer_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

// Matrix text format ---------------------------------------------------------
//
// Header `n m`, then n lines of m whitespace-separated decimals (row layout).
// Header `n m C` announces the column-major layout: m lines of n values.
// Blank lines and lines starting with '#' are ignored.

namespace detail {

inline bool skip_line(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

inline std::vector<double> parse_numbers(const std::string& line, const std::string& source,
                                         std::size_t lineno) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError(source, lineno, "not a number: '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError(source, lineno, "non-finite value '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline Matrix read_matrix(std::istream& is, const std::string& source = "<matrix>") {
  std::string line;
  std::size_t lineno = 0;
  long long rows = -1, cols = -1;
  bool column_major = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> rows >> cols) || rows < 1 || cols < 1)
      throw ParseError(source, lineno, "expected header 'n m' with positive counts");
    if (hs >> extra) {
      if (extra != "C") throw ParseError(source, lineno, "unknown layout flag '" + extra + "'");
      column_major = true;
    }
    break;
  }
  if (rows < 0) throw ParseError(source, lineno, "missing header");

  const long long lines_expected = column_major ? cols : rows;
  const long long per_line = column_major ? rows : cols;
  Matrix A(rows, cols);
  long long got = 0;
  while (got < lines_expected && std::getline(is, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    const auto values = detail::parse_numbers(line, source, lineno);
    if (static_cast<long long>(values.size()) != per_line)
      throw ParseError(source, lineno,
                       "expected " + std::to_string(per_line) + " values, found " +
                           std::to_string(values.size()));
    for (long long c = 0; c < per_line; ++c) {
      if (column_major)
        A(c, got) = values[static_cast<std::size_t>(c)];
      else
        A(got, c) = values[static_cast<std::size_t>(c)];
    }
    ++got;
  }
  if (got < lines_expected)
    throw ParseError(source, lineno + 1,
                     "expected " + std::to_string(lines_expected) + " data lines, found " +
                         std::to_string(got));
  while (std::getline(is, line)) {
    ++lineno;
    if (!detail::skip_line(line)) throw ParseError(source, lineno, "trailing data");
  }
  return A;
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_matrix(in, path);
}

/// Vectors are stored as n x 1 matrices; a header holding only `n` is also
/// accepted, followed by n values in any line layout.
inline Vector read_vector(std::istream& is, const std::string& source = "<vector>") {
  std::stringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(probe, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    const auto header = detail::parse_numbers(line, source, lineno);
    if (header.size() == 1) {
      const double nd = header[0];
      if (nd < 1 || nd != std::floor(nd))
        throw ParseError(source, lineno, "expected a positive length");
      const auto n = static_cast<std::size_t>(nd);
      std::vector<double> values;
      while (std::getline(probe, line)) {
        ++lineno;
        if (detail::skip_line(line)) continue;
        auto v = detail::parse_numbers(line, source, lineno);
        values.insert(values.end(), v.begin(), v.end());
        if (values.size() > n) throw ParseError(source, lineno, "more than n values");
      }
      if (values.size() != n)
        throw ParseError(source, lineno, "expected " + std::to_string(n) + " values, found " +
                                             std::to_string(values.size()));
      return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(n));
    }
    break;
  }
  std::istringstream again(text);
  const Matrix A = read_matrix(again, source);
  if (A.cols() != 1)
    throw ParseError(source, 1, "expected a single column, found " + std::to_string(A.cols()));
  return A.col(0);
}

inline Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_vector(in, path);
}

inline void write_matrix(std::ostream& os, const Matrix& A, bool column_major = false) {
  os << A.rows() << ' ' << A.cols() << (column_major ? " C" : "") << '\n';
  const Eigen::Index lines = column_major ? A.cols() : A.rows();
  const Eigen::Index per = column_major ? A.rows() : A.cols();
  for (Eigen::Index l = 0; l < lines; ++l) {
    for (Eigen::Index c = 0; c < per; ++c) {
      if (c) os << ' ';
      os << format_double(column_major ? A(c, l) : A(l, c));
    }
    os << '\n';
  }
}

// JSON -----------------------------------------------------------------------

inline json to_json_vector(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json trace_to_json(const SolverTrace& t) {
  json j;
  j["algorithm"] = to_string(t.algorithm);
  j["index_base"] = 0;
  j["initial_residual_norm"] = t.residual_norms.empty() ? 0.0 : t.residual_norms.front();
  json iters = json::array();
  for (std::size_t i = 0; i < t.selected.size(); ++i) {
    json it;
    it["iteration"] = i + 1;
    it["selected"] = t.selected[i];
    it["residual_norm"] = t.residual_norms.at(i + 1);
    if (i < t.scores.size()) {
      json sc = json::object();
      for (const auto& [idx, s] : t.scores[i]) sc[std::to_string(idx)] = s;
      it["scores"] = sc;
    }
    iters.push_back(it);
  }
  j["iterations"] = iters;
  j["selected"] = t.selected;
  j["support"] = t.support();
  j["coefficients"] = to_json_vector(t.coefficients);
  j["final_residual_norm"] = t.residual_norms.empty() ? 0.0 : t.residual_norms.back();
  return j;
}

/// Reads the selection sequence of a serialized trace, converted to 0-based.
inline IndexList trace_selection_from_json(const json& j) {
  if (!j.contains("selected") || !j["selected"].is_array())
    throw SchemaError("/selected", "expected an array of indices");
  const long long base = j.value("index_base", 0);
  if (base != 0 && base != 1) throw SchemaError("/index_base", "must be 0 or 1");
  IndexList out;
  for (std::size_t i = 0; i < j["selected"].size(); ++i) {
    const auto& v = j["selected"][i];
    if (!v.is_number_integer() || v.get<long long>() < base)
      throw SchemaError("/selected/" + std::to_string(i), "expected an index >= " +
                                                              std::to_string(base));
    out.push_back(static_cast<std::size_t>(v.get<long long>() - base));
  }
  return out;
}

inline json erc_to_json(const ErcReport& r) {
  json j;
  j["index_base"] = 0;
  j["m_omp"] = r.m_omp;
  j["m_ols_per_iter"] = r.m_ols_per_iter;
  j["erc_holds"] = r.erc_holds;
  j["path"] = r.path;
  return j;
}

inline json verdict_to_json(const Theorem1Verdict& v) {
  return {{"beta_min", v.beta_min},
          {"rhs_literal", v.rhs_literal},
          {"rhs_consistent", v.rhs_consistent},
          {"holds_literal", v.holds_literal},
          {"holds_consistent", v.holds_consistent},
          {"eps_eta", v.eps_eta},
          {"sigma_min", v.sigma_min},
          {"M", v.M}};
}

inline json bound_to_json(const BoundParams& p, const BoundResult& r) {
  return {{"params",
           {{"n", p.n}, {"m", p.m}, {"k", p.k}, {"eps", p.eps}, {"delta", p.delta}, {"t", p.t}}},
          {"p1_base", r.p1_base},
          {"p1", r.p1},
          {"p2", r.p2},
          {"p3_factor", r.p3_factor},
          {"product_literal", r.product_literal},
          {"total_raw", r.total_raw},
          {"total", r.total},
          {"vacuous", r.vacuous}};
}

inline json lemma_report_to_json(const LemmaReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  return {{"all_passed", rep.all_passed()}, {"checks", checks}};
}

// Grid config ------------------------------------------------------------------

namespace detail {

template <typename Enum>
Enum parse_enum(const json& v, const std::string& ptr,
                std::initializer_list<std::pair<const char*, Enum>> table) {
  if (!v.is_string()) throw SchemaError(ptr, "expected a string");
  const auto s = v.get<std::string>();
  for (const auto& [name, e] : table)
    if (s == name) return e;
  std::string allowed;
  for (const auto& [name, e] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw SchemaError(ptr, "unknown value '" + s + "' (allowed: " + allowed + ")");
}

inline EnsembleKind parse_ensemble(const json& v, const std::string& ptr) {
  return parse_enum<EnsembleKind>(
      v, ptr, {{"GAUSSIAN", EnsembleKind::Gaussian}, {"BERNOULLI", EnsembleKind::Bernoulli}});
}

inline MagnitudeLaw parse_law(const json& v, const std::string& ptr) {
  return parse_enum<MagnitudeLaw>(v, ptr,
                                  {{"CONSTANT", MagnitudeLaw::Constant},
                                   {"UNIFORM_ABOVE_MIN", MagnitudeLaw::UniformAboveMin},
                                   {"GAUSSIAN_REJECTED", MagnitudeLaw::GaussianRejected}});
}

inline std::size_t parse_count(const json& v, const std::string& ptr, std::size_t min = 1) {
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
    throw SchemaError(ptr, "expected an integer >= " + std::to_string(min));
  return v.get<std::size_t>();
}

inline double parse_real(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw SchemaError(ptr, "expected a number");
  return v.get<double>();
}

inline bool parse_bool(const json& v, const std::string& ptr) {
  if (!v.is_boolean()) throw SchemaError(ptr, "expected true or false");
  return v.get<bool>();
}

template <typename T, typename Fn>
std::vector<T> parse_array(const json& v, const std::string& ptr, Fn&& item) {
  if (!v.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

}  // namespace detail

enum class ExperimentMode { PhaseTransition, BoundComparison, CertificateSoundness };

inline std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::PhaseTransition: return "phase_transition";
    case ExperimentMode::BoundComparison: return "bound_comparison";
    case ExperimentMode::CertificateSoundness: return "certificate_soundness";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentGrid grid;
  ExperimentMode mode = ExperimentMode::PhaseTransition;
};

inline ExperimentConfig parse_experiment_config(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw SchemaError("", "expected a JSON object");
  ExperimentConfig cfg;
  ExperimentGrid& g = cfg.grid;
  bool have_n = false, have_m = false, have_k = false;
  for (const auto& [key, v] : j.items()) {
    const std::string ptr = "/" + key;
    auto count = [](const json& x, const std::string& p) { return parse_count(x, p); };
    if (key == "n") g.n = parse_array<std::size_t>(v, ptr, count), have_n = true;
    else if (key == "m") g.m = parse_array<std::size_t>(v, ptr, count), have_m = true;
    else if (key == "k") g.k = parse_array<std::size_t>(v, ptr, count), have_k = true;
    else if (key == "eps_eta")
      g.eps_eta = parse_array<double>(v, ptr, [](const json& x, const std::string& p) {
        const double e = parse_real(x, p);
        if (!(e >= 0.0)) throw SchemaError(p, "expected a nonnegative number");
        return e;
      });
    else if (key == "ensembles") g.ensembles = parse_array<EnsembleKind>(v, ptr, parse_ensemble);
    else if (key == "magnitude_laws") g.magnitude_laws = parse_array<MagnitudeLaw>(v, ptr, parse_law);
    else if (key == "trials_per_cell") g.trials_per_cell = parse_count(v, ptr);
    else if (key == "master_seed") {
      if (!v.is_number_unsigned()) throw SchemaError(ptr, "expected a nonnegative integer");
      g.master_seed = v.get<std::uint64_t>();
    } else if (key == "solver")
      g.solver = parse_enum<SolverChoice>(
          v, ptr, {{"OLS", SolverChoice::OLS}, {"OMP", SolverChoice::OMP}, {"BOTH", SolverChoice::Both}});
    else if (key == "beta_min") {
      g.beta_min = parse_real(v, ptr);
      if (!(g.beta_min > 0.0)) throw SchemaError(ptr, "expected a positive number");
    } else if (key == "sign_law")
      g.sign_law = parse_enum<SignLaw>(v, ptr, {{"RANDOM", SignLaw::Random}, {"POSITIVE", SignLaw::Positive}});
    else if (key == "noise_mode")
      g.noise_mode = parse_enum<NoiseMode>(v, ptr,
                                           {{"EXACT_NORM", NoiseMode::ExactNorm},
                                            {"UNIFORM_BALL", NoiseMode::UniformBall},
                                            {"GAUSSIAN_CLIPPED", NoiseMode::GaussianClipped}});
    else if (key == "unit_columns") g.unit_columns = parse_bool(v, ptr);
    else if (key == "orthonormalize") g.orthonormalize = parse_bool(v, ptr);
    else if (key == "certificates") g.certificates = parse_bool(v, ptr);
    else if (key == "record_timing") g.record_timing = parse_bool(v, ptr);
    else if (key == "budget") {
      g.budget = parse_real(v, ptr);
      if (!(g.budget > 0.0)) throw SchemaError(ptr, "expected a positive number");
    } else if (key == "bound") {
      if (!v.is_object()) throw SchemaError(ptr, "expected an object with eps, delta, t");
      BoundSettings b;
      for (const auto& [bk, bv] : v.items()) {
        const std::string bp = ptr + "/" + bk;
        if (bk == "eps") b.eps = parse_real(bv, bp);
        else if (bk == "delta") b.delta = parse_real(bv, bp);
        else if (bk == "t") b.t = parse_real(bv, bp);
        else throw SchemaError(bp, "unknown key");
      }
      if (!(b.eps > 0 && b.eps < 1)) throw SchemaError(ptr + "/eps", "must lie in (0, 1)");
      if (!(b.delta > 0 && b.delta < 1)) throw SchemaError(ptr + "/delta", "must lie in (0, 1)");
      if (!(b.t > 0)) throw SchemaError(ptr + "/t", "must be positive");
      g.bound = b;
    } else if (key == "mode")
      cfg.mode = parse_enum<ExperimentMode>(
          v, ptr,
          {{"phase_transition", ExperimentMode::PhaseTransition},
           {"bound_comparison", ExperimentMode::BoundComparison},
           {"certificate_soundness", ExperimentMode::CertificateSoundness}});
    else if (key == "description") {
      if (!v.is_string()) throw SchemaError(ptr, "expected a string");
    } else
      throw SchemaError(ptr, "unknown key");
  }
  if (!have_n) throw SchemaError("/n", "required");
  if (!have_m) throw SchemaError("/m", "required");
  if (!have_k) throw SchemaError("/k", "required");
  if (cfg.mode == ExperimentMode::BoundComparison && !g.bound)
    throw SchemaError("/bound", "required for bound_comparison");
  return cfg;
}

/// Canonical echo of a grid, used in manifests and for hashing.
inline json grid_to_json(const ExperimentConfig& cfg) {
  const ExperimentGrid& g = cfg.grid;
  json j;
  j["mode"] = to_string(cfg.mode);
  j["n"] = g.n;
  j["m"] = g.m;
  j["k"] = g.k;
  j["eps_eta"] = g.eps_eta;
  json ens = json::array();
  for (auto e : g.ensembles) ens.push_back(to_string(e));
  j["ensembles"] = ens;
  json laws = json::array();
  for (auto l : g.magnitude_laws) laws.push_back(to_string(l));
  j["magnitude_laws"] = laws;
  j["trials_per_cell"] = g.trials_per_cell;
  j["master_seed"] = g.master_seed;
  j["solver"] = to_string(g.solver);
  j["beta_min"] = g.beta_min;
  j["sign_law"] = g.sign_law == SignLaw::Random ? "RANDOM" : "POSITIVE";
  j["noise_mode"] = to_string(g.noise_mode);
  j["unit_columns"] = g.unit_columns;
  j["orthonormalize"] = g.orthonormalize;
  j["certificates"] = g.certificates;
  j["record_timing"] = g.record_timing;
  j["budget"] = g.budget;
  if (g.bound) j["bound"] = {{"eps", g.bound->eps}, {"delta", g.bound->delta}, {"t", g.bound->t}};
  return j;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json make_manifest(const ExperimentConfig& cfg, const std::string& csv_name) {
  const json grid = grid_to_json(cfg);
  return {{"tool", "olsrec"},
          {"version", OLSREC_VERSION},
          {"mode", to_string(cfg.mode)},
          {"master_seed", cfg.grid.master_seed},
          {"config_hash", fnv1a_hex(grid.dump())},
          {"cells", cfg.grid.cell_count()},
          {"trials_total", cfg.grid.trial_total()},
          {"csv", csv_name},
          {"grid", grid}};
}

}  // namespace olsrec
