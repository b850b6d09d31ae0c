#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dplab {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, computed once per n by Newton iteration on P_n and cached.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss quadrature of f over [a, b]: the interval is first split at
/// every cut inside it, then each part into panels no longer than max_panel.
double composite_gauss(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> cuts, double max_panel, int points = 16);

} // namespace dplab
