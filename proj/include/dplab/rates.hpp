#pragma once

#include <span>

namespace dplab {

/// Least-squares slope of log(err) against log(eps). Non-positive errors are skipped;
/// returns NaN with fewer than two usable points.
double fitted_order(std::span<const double> eps, std::span<const double> err);

/// Throws NotConverged unless each of the last three errors is below the one before
/// it. Errors at or below `floor` always pass.
void require_decreasing_tail(std::span<const double> err, double floor, char const* what);

} // namespace dplab
