#include "dplab/rates.hpp"

#include "dplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace dplab {

double fitted_order(std::span<const double> eps, std::span<const double> err)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < std::min(eps.size(), err.size()); ++i) {
        if (!(err[i] > 0.0) || !(eps[i] > 0.0)) {
            continue;
        }
        double x = std::log(eps[i]);
        double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void require_decreasing_tail(std::span<const double> err, double floor, char const* what)
{
    std::size_t n = err.size();
    for (std::size_t i = n >= 3 ? n - 2 : 1; i < n; ++i) {
        if (err[i] <= floor) {
            continue;
        }
        if (!(err[i] < err[i - 1])) {
            throw NotConverged(fmt::format("{}: error {} at step {} did not decrease from {}",
                                           what, err[i], i, err[i - 1]));
        }
    }
}

} // namespace dplab
