#pragma once

#include <filesystem>
#include <string>

#include "mwd/measures.hpp"

namespace mwd {

/// Text format (JSON):
///   {"dim": n,
///    "grid": [{"theta": t, "weight": w}, ...],
///    "masses": [ [[ [re, im], ... n entries ], ... n rows], ... K matrices ]}
/// Hermiticity and PSD are validated on load.
std::string measure_to_string(const MatrixMeasure& mu);
MatrixMeasure measure_from_string(const std::string& text);

/// I/O failures raise IoError; malformed content raises ValidationError.
void save_measure(const MatrixMeasure& mu, const std::filesystem::path& path);
MatrixMeasure load_measure(const std::filesystem::path& path);

}  // namespace mwd
