#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "utfsr/model.hpp"
#include "utfsr/reconstruct.hpp"
#include "utfsr/spectral.hpp"
#include "utfsr/wiener.hpp"

// File formats. Node labels in every document are 1-based (y1 .. yn).
namespace utfsr::io {

/// Model document:
///   { "n": 4,
///     "edges": [ {"from": 4, "to": 1, "num_coeffs": [1], "den_coeffs": [1]} ],
///     "noise": [ {"variance": 1, "coloring_coeffs": [1], "coloring_den_coeffs": [1]} ] }
/// Coefficients run over z^0, z^-1, ...; den_coeffs, noise and the coloring
/// fields are optional. Unknown keys (e.g. "comment") are ignored.
Ldim model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Ldim& m);

/// PSD dump: the half grid k = 0..N/2, entries rounded to 12 significant
/// digits with magnitudes below 1e-10 written as 0.
nlohmann::json psd_to_json(const SpectralDensity& s);
SpectralDensity psd_from_json(const nlohmann::json& doc);
bool is_psd_document(const nlohmann::json& doc);

nlohmann::json report_to_json(const ReconstructionReport& r);
std::string report_to_dot(const ReconstructionReport& r);
nlohmann::json verdict_to_json(const SeparationVerdict& v);
nlohmann::json utf_report_to_json(const UtfReport& r);

/// Header row y1..yn, one row per time step.
void write_csv(std::ostream& out, const Eigen::MatrixXd& samples);
/// Inverse of write_csv; returns an n x T matrix.
Eigen::MatrixXd read_csv(std::istream& in);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Value rounded to 12 significant digits, small magnitudes flushed to 0.
double stable_round(double value);

}  // namespace utfsr::io
