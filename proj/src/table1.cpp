#include "mwd/table1.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "mwd/matrix_primal.hpp"

namespace mwd {

using nlohmann::json;

namespace {

constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 1}, {1, 2}, {0, 2}}};
constexpr double kDeviationBand = 0.10;

double relative(double computed, double reference) {
  return (computed - reference) / std::abs(reference);
}

Table1Deviation deviation(const std::string& metric, const Table1Pair& p, double computed,
                          double reference) {
  Table1Deviation d{metric, pair_label(p.first, p.second), computed, reference,
                    relative(computed, reference), ""};
  if (std::abs(d.relative_deviation) > kDeviationBand)
    d.flag = fmt::format("deviates from reference {:g} by {:+.1f}%", reference,
                         100.0 * d.relative_deviation);
  return d;
}

GapAudit audit_pair(const MatrixMeasure& a, const MatrixMeasure& b, double kappa,
                    const DualCertificate& cert, const Table1Options& opts) {
  SolverOptions so = opts.solver;
  so.tolerance = opts.audit_tolerance;
  GapAudit g;
  TransportSolution s;
  try {
    s = solve_unbalanced_primal(a, b, kappa, so);
  } catch (const PrimalConvergenceError& e) {
    s = e.best();
  }
  g.primal = s.objective;
  g.dual = cert.value;
  const double scale = std::max(std::abs(g.primal), std::abs(g.dual));
  g.relative_gap = scale > 0.0 ? (g.primal - g.dual) / scale : 0.0;
  g.iterations = s.iterations;
  g.converged = s.converged;
  return g;
}

json certificate_json(const DualCertificate& c) {
  json f = json::array();
  for (const auto& h : c.test_function) f.push_back(hermitian_to_json(h));
  return {{"value", c.value},
          {"upper_bound", c.upper_bound},
          {"gap", c.gap()},
          {"relative_gap", c.relative_gap()},
          {"feasibility_residual", c.feasibility_residual},
          {"iterations", c.iterations},
          {"converged", c.converged},
          {"test_function", std::move(f)}};
}

}  // namespace

std::string pair_label(int first, int second) { return fmt::format("f{},f{}", first, second); }

SpectrumSamples sample_spectra(const Grid& grid) {
  SpectrumSamples s;
  s.theta = grid.points();
  for (int i = 0; i < 3; ++i)
    for (double t : s.theta) {
      const HermitianMatrix f = benchmark_density(i, t);
      s.abs12[i].push_back(std::abs(f(0, 1)));
      s.angle12[i].push_back(std::arg(f(0, 1)));
      s.f11[i].push_back(f(0, 0).real());
      s.f22[i].push_back(f(1, 1).real());
    }
  return s;
}

Table1Report table1_report(const Table1Options& opts) {
  if (!(opts.kappa > 0.0) || !std::isfinite(opts.kappa)) throw DomainError("kappa must be positive");
  if (opts.grid_points < 2) throw DomainError("grid needs at least two points");
  const Grid grid = make_uniform_grid(opts.grid_points, 0.0, std::numbers::pi);
  std::array<MatrixMeasure, 3> mu = {normalize_trace(benchmark_measure(0, grid)),
                                     normalize_trace(benchmark_measure(1, grid)),
                                     normalize_trace(benchmark_measure(2, grid))};
  Table1Report r;
  r.kappa = opts.kappa;
  r.grid_points = opts.grid_points;
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [i, j] = kPairs[p];
    Table1Pair& out = r.pairs[p];
    out.first = i;
    out.second = j;
    out.itakura_saito = itakura_saito(mu[i], mu[j]);
    out.tv = tv_matrix(mu[i], mu[j]);
    out.w1k = solve_dual(assemble_dual(mu[i], mu[j], opts.kappa), opts.solver);
    if (opts.gap_audit) out.audit = audit_pair(mu[i], mu[j], opts.kappa, out.w1k, opts);
  }
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const Table1Pair& q = r.pairs[p];
    r.deviations.push_back(deviation("is", q, q.itakura_saito, Table1Reference::is[p]));
    r.deviations.push_back(deviation("tv", q, q.tv, Table1Reference::tv[p]));
    Table1Deviation w = deviation("w1k", q, q.w1k.value, Table1Reference::w1k[p]);
    // d_W1,kappa <= kappa * d_TV for every pair; a larger reference value
    // cannot be attained under this definition.
    const double bound = opts.kappa * q.tv;
    if (Table1Reference::w1k[p] > bound + 1e-3) {
      if (!w.flag.empty()) w.flag += "; ";
      w.flag += fmt::format("reference {:g} exceeds kappa * d_TV = {:.4f}",
                            Table1Reference::w1k[p], bound);
    }
    r.deviations.push_back(std::move(w));
  }
  r.spectra = sample_spectra(grid);
  return r;
}

std::string table1_human(const Table1Report& r) {
  std::ostringstream os;
  os << fmt::format("Distances between benchmark spectra (kappa = {:g}, {} grid points)\n\n",
                    r.kappa, r.grid_points);
  os << fmt::format("{:<22}", "metric");
  for (const auto& p : r.pairs) os << fmt::format("{:>14}", pair_label(p.first, p.second));
  os << "\n";
  auto row = [&](const std::string& name, auto value) {
    os << fmt::format("{:<22}", name);
    for (std::size_t p = 0; p < 3; ++p) os << fmt::format("{:>14}", value(p));
    os << "\n";
  };
  auto num = [](double v) { return fmt::format("{:.6g}", v); };
  row("d_IS", [&](std::size_t p) { return num(r.pairs[p].itakura_saito); });
  row("  reference", [&](std::size_t p) { return num(Table1Reference::is[p]); });
  row("d_TV", [&](std::size_t p) { return num(r.pairs[p].tv); });
  row("  reference", [&](std::size_t p) { return num(Table1Reference::tv[p]); });
  row(fmt::format("d_W1,{:g}", r.kappa), [&](std::size_t p) { return num(r.pairs[p].w1k.value); });
  row("  upper bound", [&](std::size_t p) { return num(r.pairs[p].w1k.upper_bound); });
  row("  relative gap", [&](std::size_t p) {
    return fmt::format("{:.2e}", r.pairs[p].w1k.relative_gap());
  });
  row("  reference", [&](std::size_t p) { return num(Table1Reference::w1k[p]); });
  if (r.pairs[0].audit) {
    row("  transport primal", [&](std::size_t p) { return num(r.pairs[p].audit->primal); });
    row("  audit gap", [&](std::size_t p) {
      return fmt::format("{:.2e}", r.pairs[p].audit->relative_gap);
    });
  }
  row("d_T (external)", [&](std::size_t p) { return num(Table1Reference::transport[p]); });

  bool header = false;
  for (const auto& d : r.deviations) {
    if (d.flag.empty()) continue;
    if (!header) os << "\nflags:\n";
    header = true;
    os << fmt::format("  {} ({}): {:.6g} {}\n", d.metric, d.pair, d.computed, d.flag);
  }
  return os.str();
}

std::string table1_csv(const Table1Report& r) {
  std::ostringstream os;
  os << "pair,metric,value,reference,relative_deviation,lower_bound,upper_bound,relative_gap,"
        "flag\n";
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& d : r.deviations) {
    std::string lower, upper, gap;
    if (d.metric == "w1k") {
      for (const auto& p : r.pairs)
        if (pair_label(p.first, p.second) == d.pair) {
          lower = fmt::format("{:.17g}", p.w1k.value);
          upper = fmt::format("{:.17g}", p.w1k.upper_bound);
          gap = fmt::format("{:.3e}", p.w1k.relative_gap());
        }
    }
    os << fmt::format("{},{},{:.17g},{:g},{:.6f},{},{},{},{}\n", d.pair, d.metric, d.computed,
                      d.reference, d.relative_deviation, lower, upper, gap, field(d.flag));
  }
  for (std::size_t p = 0; p < 3; ++p)
    os << fmt::format("{},transport_external,,{:g},,,,,reference only\n",
                      pair_label(r.pairs[p].first, r.pairs[p].second),
                      Table1Reference::transport[p]);
  return os.str();
}

json hermitian_to_json(const HermitianMatrix& h) {
  json rows = json::array();
  for (Index i = 0; i < h.dim(); ++i) {
    json row = json::array();
    for (Index j = 0; j < h.dim(); ++j) row.push_back({h(i, j).real(), h(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json table1_json(const Table1Report& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json entry = {{"pair", pair_label(p.first, p.second)},
                  {"itakura_saito", p.itakura_saito},
                  {"tv", p.tv},
                  {"w1k", certificate_json(p.w1k)}};
    if (p.audit)
      entry["gap_audit"] = {{"primal", p.audit->primal},
                            {"dual", p.audit->dual},
                            {"relative_gap", p.audit->relative_gap},
                            {"iterations", p.audit->iterations},
                            {"converged", p.audit->converged}};
    pairs.push_back(std::move(entry));
  }
  json devs = json::array();
  for (const auto& d : r.deviations)
    devs.push_back({{"metric", d.metric},
                    {"pair", d.pair},
                    {"computed", d.computed},
                    {"reference", d.reference},
                    {"relative_deviation", d.relative_deviation},
                    {"flag", d.flag}});
  json spectra = {{"theta", r.spectra.theta}};
  for (int i = 0; i < 3; ++i)
    spectra[fmt::format("f{}", i)] = {{"abs12", r.spectra.abs12[i]},
                                      {"angle12", r.spectra.angle12[i]},
                                      {"f11", r.spectra.f11[i]},
                                      {"f22", r.spectra.f22[i]}};
  return {{"kappa", r.kappa},
          {"grid_points", r.grid_points},
          {"normalization", "unit total trace"},
          {"pairs", std::move(pairs)},
          {"reference",
           {{"is", Table1Reference::is},
            {"tv", Table1Reference::tv},
            {"w1k", Table1Reference::w1k},
            {"transport", {{"values", Table1Reference::transport}, {"source", "external"}}}}},
          {"deviations", std::move(devs)},
          {"spectra", std::move(spectra)}};
}

std::string spectra_csv(const SpectrumSamples& s) {
  std::ostringstream os;
  os << "theta";
  for (int i = 0; i < 3; ++i)
    os << fmt::format(",f{0}_abs12,f{0}_angle12,f{0}_11,f{0}_22", i);
  os << "\n";
  for (std::size_t k = 0; k < s.theta.size(); ++k) {
    os << fmt::format("{:.17g}", s.theta[k]);
    for (int i = 0; i < 3; ++i)
      os << fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g}", s.abs12[i][k], s.angle12[i][k],
                        s.f11[i][k], s.f22[i][k]);
    os << "\n";
  }
  return os.str();
}

}  // namespace mwd
