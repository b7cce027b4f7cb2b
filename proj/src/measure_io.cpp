#include "mwd/measure_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mwd/errors.hpp"

namespace mwd {

using nlohmann::json;

namespace {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& rows, Index n) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw ValidationError("mass matrix must have `dim` rows");
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ValidationError("mass matrix rows must have `dim` entries");
    for (Index j = 0; j < n; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ValidationError("matrix entries must be [re, im] pairs");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

std::string measure_to_string(const MatrixMeasure& mu) {
  json doc;
  doc["dim"] = mu.dim();
  json grid = json::array();
  for (std::size_t k = 0; k < mu.grid().size(); ++k)
    grid.push_back({{"theta", mu.grid().point(k)}, {"weight", mu.grid().weight(k)}});
  doc["grid"] = std::move(grid);
  json masses = json::array();
  for (const auto& m : mu.masses()) masses.push_back(matrix_to_json(m.matrix()));
  doc["masses"] = std::move(masses);
  return doc.dump(1) + "\n";
}

MatrixMeasure measure_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("measure file is not valid JSON: ") + e.what());
  }
  try {
    const Index n = doc.at("dim").get<Index>();
    if (n < 1) throw ValidationError("`dim` must be >= 1");
    std::vector<double> points, weights;
    for (const auto& node : doc.at("grid")) {
      points.push_back(node.at("theta").get<double>());
      weights.push_back(node.at("weight").get<double>());
    }
    std::vector<HermitianMatrix> masses;
    for (const auto& node : doc.at("masses"))
      masses.emplace_back(matrix_from_json(node, n));
    return MatrixMeasure(Grid(std::move(points), std::move(weights)), std::move(masses));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed measure file: ") + e.what());
  } catch (const ShapeError& e) {
    throw ValidationError(std::string("inconsistent measure file: ") + e.what());
  }
}

void save_measure(const MatrixMeasure& mu, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << measure_to_string(mu);
  if (!out) throw IoError("failed writing " + path.string());
}

MatrixMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return measure_from_string(buf.str());
}

}  // namespace mwd
