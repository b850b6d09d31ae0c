#include "dplab/tridiagonal.hpp"

#include "dplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace dplab {

TridiagonalSolution solve_tridiagonal(const TridiagonalSystem& sys,
                                      std::span<const std::complex<double>> rhs)
{
    std::size_t n = sys.size();
    if (n == 0 || sys.lower.size() != n || sys.upper.size() != n || rhs.size() != n) {
        throw ValidationError("tridiagonal system has inconsistent sizes");
    }

    double a_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a_max = std::max({a_max, std::abs(sys.diag[i]), i > 0 ? std::abs(sys.lower[i]) : 0.0,
                          i + 1 < n ? std::abs(sys.upper[i]) : 0.0});
    }

    std::vector<std::complex<double>> c(n);
    TridiagonalSolution out;
    out.x.resize(n);
    double u_max = 0.0;
    std::complex<double> pivot = sys.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (pivot == 0.0) {
            throw IllConditioned(fmt::format("zero pivot in row {}", i));
        }
        u_max = std::max({u_max, std::abs(pivot), i + 1 < n ? std::abs(sys.upper[i]) : 0.0});
        std::complex<double> inv = 1.0 / pivot;
        c[i] = i + 1 < n ? sys.upper[i] * inv : 0.0;
        out.x[i] = (rhs[i] - (i > 0 ? sys.lower[i] * out.x[i - 1] : 0.0)) * inv;
        if (i + 1 == n) {
            break;
        }
        pivot = sys.diag[i + 1] - sys.lower[i + 1] * c[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        out.x[i] -= c[i] * out.x[i + 1];
    }

    out.growth_factor = a_max > 0.0 ? u_max / a_max : 1.0;
    if (!(out.growth_factor <= kMaxGrowthFactor)) {
        throw IllConditioned(
            fmt::format("tridiagonal growth factor {} exceeds {}", out.growth_factor,
                        kMaxGrowthFactor));
    }
    return out;
}

} // namespace dplab
