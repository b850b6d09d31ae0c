#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dplab {

/// Row i reads  lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1];
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
    std::vector<std::complex<double>> lower;
    std::vector<std::complex<double>> diag;
    std::vector<std::complex<double>> upper;

    std::size_t size() const { return diag.size(); }
};

struct TridiagonalSolution {
    std::vector<std::complex<double>> x;
    /// max |entry of the upper factor| / max |entry of the matrix|
    double growth_factor = 1.0;
};

/// Largest growth factor accepted by solve_tridiagonal.
inline constexpr double kMaxGrowthFactor = 1e8;

/// Thomas elimination without pivoting. Throws IllConditioned on a zero pivot
/// or when the growth factor exceeds kMaxGrowthFactor.
TridiagonalSolution solve_tridiagonal(const TridiagonalSystem& sys,
                                      std::span<const std::complex<double>> rhs);

} // namespace dplab
