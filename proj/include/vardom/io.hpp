#pragma once

#include "vardom/compare.hpp"
#include "vardom/field.hpp"
#include "vardom/pde.hpp"
#include "vardom/poincare.hpp"
#include "vardom/ze.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace vardom {

/// Mask files: <base>.mask holds one unsigned byte (0/1) per cell in
/// row-major order; <base>.json is the sidecar {dim, origin, spacing, shape}.
/// Round trips are bit-exact.
void write_mask(const DomainMask& m, const std::string& base);
DomainMask read_mask(const std::string& base);

/// Field files: <base>.f64 holds the inside-cell values as little-endian
/// 64-bit floats in mask row-major order; <base>.json names the mask file.
void write_field(const Field& f, const std::string& base, const std::string& mask_base);
Field read_field(const std::string& base);

nlohmann::ordered_json grid_to_json(const GridSpec& spec);
GridSpec grid_from_json(const nlohmann::json& j);

/// Convergence report serialization: full JSON plus per-index CSV rows
/// (i, strong distance, norm gap, max pairing residual).
nlohmann::ordered_json report_to_json(const ConvergenceReport& rep);
std::string report_to_csv(const ConvergenceReport& rep);

std::string poincare_to_csv(const std::vector<PoincareEstimate>& estimates);
nlohmann::ordered_json equivalence_to_json(const EquivalenceReport& rep);
std::string equivalence_to_csv(const EquivalenceReport& rep);
std::string shape_table_to_csv(const ShapeSearchResult& res);
nlohmann::ordered_json shape_result_to_json(const ShapeSearchResult& res);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

} // namespace vardom
