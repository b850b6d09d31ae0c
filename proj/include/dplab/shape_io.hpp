#pragma once

#include "dplab/potential.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace dplab {

// Shape files are JSON:
//   { "label": "well", "pieces": [ { "interval": [-1, 1], "coeffs": [-1] } ] }
// Coefficients are in ascending degree. All parse failures throw ValidationError.

ShapePotential parse_shape(std::string_view json_text);
ShapePotential load_shape(const std::filesystem::path& path);
std::string shape_to_json(const ShapePotential& shape);

/// Same layout without the [-1, 1] restriction (right-hand sides of the resolvent lab).
PiecewisePolynomial parse_piecewise(std::string_view json_text);
PiecewisePolynomial load_piecewise(const std::filesystem::path& path);

} // namespace dplab
