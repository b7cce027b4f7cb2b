// Command-line front end: distances between measure files, the benchmark
// distance table and benchmark spectrum generation.
//
// Exit codes: 0 success, 1 I/O, 2 invalid input, 3 solver did not converge.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mwd/benchmark_spectra.hpp"
#include "mwd/connes.hpp"
#include "mwd/matrix_dual.hpp"
#include "mwd/matrix_primal.hpp"
#include "mwd/measure_io.hpp"
#include "mwd/scalar_metrics.hpp"
#include "mwd/table1.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mwd;

namespace {

enum ExitCode { kOk = 0, kIo = 1, kInvalid = 2, kSolver = 3 };

struct RunConfig {
  std::string metric = "matrix-w1k";
  std::vector<std::string> inputs;
  std::string dirac;
  std::string kappa_text = "1";
  double tolerance = 1e-6;
  long max_iterations = 200000;
  std::string format = "human";
  std::string out;
  std::string out_dir = ".";
  std::string plot_data;
  std::size_t grid_points = 36;
  bool gap_audit = false;
  bool raw = false;
};

double parse_kappa(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double k = 0.0;
  try {
    k = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(k > 0.0)) throw DomainError("--kappa must be positive or 'inf'");
  return k;
}

SolverOptions solver_options(const RunConfig& c) {
  if (!(c.tolerance > 0.0)) throw DomainError("--tol must be positive");
  if (c.max_iterations < 1) throw DomainError("--max-iter must be positive");
  SolverOptions o;
  o.tolerance = c.tolerance;
  o.max_iterations = c.max_iterations;
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

ComplexMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("matrix must be a nonempty array");
  const Index n = static_cast<Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<Index>(rows[i].size()) != n)
      throw ValidationError("matrix must be square");
    for (Index j = 0; j < n; ++j) {
      const json& e = rows[i][j];
      if (e.is_number()) {
        m(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json parse_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// State file: {"matrix": [[...], ...]}.
State load_state(const std::string& path) {
  const json doc = parse_json(path);
  if (!doc.is_object() || !doc.contains("matrix")) throw ValidationError(path + ": missing \"matrix\"");
  return State(HermitianMatrix(matrix_from_json(doc["matrix"])));
}

// Dirac file: {"operators": [matrix, ...]}.
DiracSet load_dirac(const std::string& path) {
  const json doc = parse_json(path);
  if (!doc.is_object() || !doc.contains("operators") || !doc["operators"].is_array())
    throw ValidationError(path + ": missing \"operators\" list");
  std::vector<HermitianMatrix> ops;
  for (const auto& m : doc["operators"]) ops.emplace_back(matrix_from_json(m));
  return DiracSet(std::move(ops));
}

void require_scalar(const MatrixMeasure& mu, const std::string& metric) {
  if (mu.dim() != 1) throw ValidationError("metric " + metric + " needs scalar (dim 1) measures");
}

// Ordered key/value report shared by the three output formats.
struct DistReport {
  std::vector<std::pair<std::string, json>> fields;
  json certificate;
  void add(const std::string& k, json v) { fields.emplace_back(k, std::move(v)); }
};

std::string render(const DistReport& r, const std::string& format) {
  if (format == "structured") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) doc[k] = nlohmann::ordered_json::parse(v.dump());
    if (!r.certificate.is_null())
      doc["certificate"] = nlohmann::ordered_json::parse(r.certificate.dump());
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  auto text = [](const json& v) {
    if (v.is_number_float()) return fmt::format("{:.17g}", v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  if (format == "csv") {
    os << "key,value\n";
    for (const auto& [k, v] : r.fields) os << k << "," << text(v) << "\n";
  } else {
    for (const auto& [k, v] : r.fields) os << fmt::format("{:<22}{}\n", k, text(v));
  }
  return os.str();
}

json certificate_json(const DualCertificate& c) {
  json f = json::array();
  for (const auto& h : c.test_function) f.push_back(hermitian_to_json(h));
  return {{"test_function", std::move(f)},
          {"feasibility_residual", c.feasibility_residual},
          {"lower_bound", c.value},
          {"upper_bound", c.upper_bound},
          {"relative_gap", c.relative_gap()}};
}

void add_dual(DistReport& r, const DualCertificate& c) {
  r.add("value", c.value);
  r.add("upper_bound", c.upper_bound);
  r.add("relative_gap", c.relative_gap());
  r.add("feasibility_residual", c.feasibility_residual);
  r.add("iterations", c.iterations);
  r.add("converged", c.converged);
  r.certificate = certificate_json(c);
}

int cmd_dist(const RunConfig& c) {
  if (c.inputs.size() != 2) throw ValidationError("dist needs exactly two input files");
  const double kappa = parse_kappa(c.kappa_text);
  const SolverOptions so = solver_options(c);
  DistReport r;
  r.add("metric", c.metric);
  int code = kOk;

  if (c.metric == "connes") {
    if (c.dirac.empty()) throw ValidationError("metric connes needs --dirac FILE");
    const State a = load_state(c.inputs[0]), b = load_state(c.inputs[1]);
    const DiracSet d = load_dirac(c.dirac);
    r.add("kappa", std::isfinite(kappa) ? json(kappa) : json("inf"));
    try {
      const ConnesResult res = connes_distance(a, b, d, kappa, so);
      r.add("value", res.value);
      r.add("unbounded", res.unbounded);
      r.add("upper_bound", res.upper_bound);
      r.add("final_kappa", res.kappa);
      r.add("feasibility_residual", connes_residual(res.witness, d, res.kappa));
      r.add("iterations", res.iterations);
      r.add("converged", res.converged);
      r.certificate = {{"witness", hermitian_to_json(res.witness)}};
    } catch (const ConvergenceError& e) {
      r.add("converged", false);
      r.add("error", e.what());
      code = kSolver;
    }
    write_output(render(r, c.format), c.out);
    return code;
  }

  const MatrixMeasure a = load_measure(c.inputs[0]);
  const MatrixMeasure b = load_measure(c.inputs[1]);
  require_compatible(a, b);
  const bool needs_kappa = c.metric == "w1k" || c.metric == "matrix-w1k";
  if (needs_kappa && !std::isfinite(kappa)) throw DomainError("--kappa must be finite for " + c.metric);
  if (needs_kappa) r.add("kappa", kappa);

  if (c.metric == "tv") {
    require_scalar(a, c.metric);
    r.add("value", tv_scalar(a, b));
  } else if (c.metric == "kolmogorov") {
    require_scalar(a, c.metric);
    r.add("value", kolmogorov(a, b));
  } else if (c.metric == "w1") {
    require_scalar(a, c.metric);
    r.add("value", w1_balanced(a, b));
  } else if (c.metric == "w1k") {
    require_scalar(a, c.metric);
    r.add("value", w1_kappa_scalar(a, b, kappa));
  } else if (c.metric == "matrix-tv") {
    r.add("value", tv_matrix(a, b));
  } else if (c.metric == "is") {
    r.add("value", itakura_saito(a, b));
  } else if (c.metric == "matrix-w1k") {
    DualCertificate cert;
    try {
      cert = solve_dual(assemble_dual(a, b, kappa), so);
    } catch (const DualConvergenceError& e) {
      cert = e.best();
      code = kSolver;
    }
    add_dual(r, cert);
    if (c.gap_audit) {
      TransportSolution s;
      try {
        s = solve_unbalanced_primal(a, b, kappa, so);
      } catch (const PrimalConvergenceError& e) {
        s = e.best();
        code = kSolver;
      }
      const double scale = std::max(std::abs(s.objective), std::abs(cert.value));
      r.add("primal_objective", s.objective);
      r.add("primal_iterations", s.iterations);
      r.add("primal_converged", s.converged);
      r.add("duality_gap", scale > 0.0 ? (s.objective - cert.value) / scale : 0.0);
    }
  } else {
    throw ValidationError("unknown metric " + c.metric);
  }
  write_output(render(r, c.format), c.out);
  return code;
}

int cmd_table1(const RunConfig& c) {
  Table1Options o;
  o.kappa = parse_kappa(c.kappa_text);
  if (!std::isfinite(o.kappa)) throw DomainError("--kappa must be finite for table1");
  o.grid_points = c.grid_points;
  o.solver = solver_options(c);
  o.gap_audit = c.gap_audit;
  Table1Report r;
  try {
    r = table1_report(o);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  std::string text;
  if (c.format == "csv")
    text = table1_csv(r);
  else if (c.format == "structured")
    text = table1_json(r).dump(2) + "\n";
  else
    text = table1_human(r);
  write_output(text, c.out);

  fs::path plot = c.plot_data;
  if (plot.empty())
    plot = (c.out.empty() ? fs::path(".") : fs::path(c.out).parent_path()) / "table1_spectra.csv";
  write_output(spectra_csv(r.spectra), plot.string());
  return kOk;
}

int cmd_gen_spectra(const RunConfig& c) {
  if (c.grid_points < 2) throw DomainError("--grid-points must be at least 2");
  const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const Grid grid = make_uniform_grid(c.grid_points, 0.0, std::numbers::pi);
  for (int i = 0; i < 3; ++i) {
    MatrixMeasure mu = benchmark_measure(i, grid);
    if (!c.raw) mu = normalize_trace(mu);
    const fs::path p = dir / fmt::format("f{}.json", i);
    save_measure(mu, p);
    std::cout << p.string() << "\n";
  }
  return kOk;
}

void add_solver_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--kappa", c.kappa_text, "TV penalty weight (positive; 'inf' for connes)")
      ->default_val("1");
  cmd->add_option("--tol", c.tolerance, "Relative duality-gap tolerance")->default_val(1e-6);
  cmd->add_option("--max-iter", c.max_iterations, "Iteration budget per solve")
      ->default_val(200000);
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"human", "human-table", "csv", "structured"}))
      ->default_val("human");
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_flag("--gap-audit", c.gap_audit, "Also solve the transport program and report the gap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matricial transport and test-function distances between spectral measures"};
  app.require_subcommand(1);
  RunConfig c;

  CLI::App* dist = app.add_subcommand("dist", "Distance between two measure (or state) files");
  dist->add_option("--metric", c.metric, "Metric")
      ->check(CLI::IsMember(
          {"tv", "kolmogorov", "w1", "w1k", "matrix-tv", "matrix-w1k", "is", "connes"}))
      ->default_val("matrix-w1k");
  dist->add_option("inputs", c.inputs, "Two input files")->required()->expected(2);
  dist->add_option("--dirac", c.dirac, "Dirac operator file (metric connes)");
  add_solver_flags(dist, c);

  CLI::App* table = app.add_subcommand("table1", "Distances between the benchmark spectra");
  add_solver_flags(table, c);
  table->add_option("--grid-points", c.grid_points, "Grid size on [0, pi]")->default_val(36);
  table->add_option("--plot-data", c.plot_data,
                    "Spectrum samples CSV (default: table1_spectra.csv next to --out)");

  CLI::App* gen = app.add_subcommand("gen-spectra", "Write the benchmark measures f0, f1, f2");
  gen->add_option("--grid-points", c.grid_points, "Grid size on [0, pi]")->default_val(36);
  gen->add_option("--out", c.out_dir, "Output directory")->default_val(".");
  gen->add_flag("--raw", c.raw, "Skip normalization to unit total trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (c.format == "human-table") c.format = "human";

  try {
    if (dist->parsed()) return cmd_dist(c);
    if (table->parsed()) return cmd_table1(c);
    return cmd_gen_spectra(c);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
