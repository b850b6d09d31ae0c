#pragma once

#include "dplab/potential.hpp"

#include <complex>
#include <span>
#include <vector>

namespace dplab {

/// The zero-range limit of S_eps.
///
/// Resonant: -y'' on R\{0} with y(+0) = mu y(-0), y'(+0) = y'(-0)/mu + nu y(-0).
/// Split: two Dirichlet half-lines, y(-0) = y(+0) = 0.
struct LimitOperator {
    enum class Kind { Resonant, NonResonantSplit };

    Kind kind = Kind::NonResonantSplit;
    double mu = 1.0;
    double nu = 0.0;

    static LimitOperator resonant(double mu, double nu);
    static LimitOperator split() { return {}; }
};

/// Right-hand side f, spectral point zeta and grid for (S - zeta)^{-1} f.
struct ResolventProbe {
    PiecewisePolynomial f;
    std::complex<double> zeta{0.0, 2.0};
    double half_width = 8.0;       ///< grid covers [-L, L]
    double grid_step = 1.0 / 512.0;

    /// Im zeta != 0, L >= 4, h > 0 and supp f strictly inside (-L, L).
    void validate() const;
};

/// Boundary rows of the finite-difference operator at x = -L and x = L.
enum class OuterBoundary {
    Transparent, ///< exact discrete outgoing condition: no truncation error
    Dirichlet,   ///< y(-L) = y(L) = 0
};

/// Grid function on x_j = -L + j h, j = 0..N.
struct ResolventTrace {
    std::vector<double> x;
    std::vector<std::complex<double>> y;
    double h = 0.0;
};

/// Closed-form resolvent of a LimitOperator for a piecewise-polynomial f.
///
/// y = free convolution with e^{i w |x - t|} i/(2w), w = sqrt(zeta) with Im w > 0,
/// plus A e^{-iwx} on x < 0 and B e^{iwx} on x > 0 fixed by the conditions at 0.
class LimitResolvent {
public:
    LimitResolvent(LimitOperator op, PiecewisePolynomial f, std::complex<double> zeta);

    /// One-sided values: x < 0 uses the left branch, x >= 0 the right one.
    std::complex<double> value(double x) const;
    std::complex<double> derivative(double x) const;
    /// -zeta y - f, from the structure of the solution.
    std::complex<double> second_derivative(double x) const;

    std::complex<double> left_value() const { return value_side(0.0, false); }
    std::complex<double> right_value() const { return value_side(0.0, true); }
    std::complex<double> left_derivative() const { return derivative_side(0.0, false); }
    std::complex<double> right_derivative() const { return derivative_side(0.0, true); }

    std::complex<double> omega() const { return omega_; }
    const LimitOperator& op() const { return op_; }

private:
    std::complex<double> value_side(double x, bool right) const;
    std::complex<double> derivative_side(double x, bool right) const;
    /// {int_{t<x} e^{-iw(t-x)} f dt, int_{t>x} e^{iw(t-x)} f dt}
    std::pair<std::complex<double>, std::complex<double>> tails(double x) const;

    LimitOperator op_;
    PiecewisePolynomial f_;
    std::complex<double> zeta_;
    std::complex<double> omega_;
    std::complex<double> a_; ///< left homogeneous amplitude
    std::complex<double> b_; ///< right homogeneous amplitude
};

/// Exact limit resolvent sampled on the probe grid.
ResolventTrace solve_limit_resolvent(const LimitOperator& op, const ResolventProbe& probe);

/// Second-order finite differences for -y'' + V_eps y - zeta y = f on [-L, L],
/// with cell-averaged V_eps and f (exact piecewise-polynomial integrals).
/// Requires h <= eps/32; throws IllConditioned if the tridiagonal solve degenerates.
ResolventTrace solve_eps_resolvent(const ShapePotential& phi, const ShapePotential& psi,
                                   double alpha, double beta, double eps,
                                   const ResolventProbe& probe,
                                   OuterBoundary boundary = OuterBoundary::Transparent);

/// sqrt(h sum |y_j|^2) over nodes with |x_j| > exclude.
double discrete_l2(const ResolventTrace& t, double exclude = -1.0);
/// sqrt(h sum |a_j - b_j|^2) over nodes with |x_j| > exclude; traces share a grid.
double discrete_l2_distance(const ResolventTrace& a, const ResolventTrace& b,
                            double exclude = -1.0);

struct ResolventErrorOptions {
    double cells_per_eps = 64.0; ///< h = eps / cells_per_eps
    OuterBoundary boundary = OuterBoundary::Transparent;
    double floor = 1e-12;        ///< errors below this pass the monotonicity check
};

struct ResolventErrorRow {
    double eps = 0.0;
    double h = 0.0;
    double error_l2 = 0.0; ///< ||y_eps - y|| over |x| > eps
    double norm_y_eps = 0.0;
};

struct ResolventErrorReport {
    LimitOperator limit;
    std::vector<ResolventErrorRow> rows;
    double order = 0.0;
    double norm_f = 0.0;
};

/// Distance between the discrete (S_eps - zeta)^{-1} f and the limit resolvent for
/// each eps in the strictly decreasing list, and the fitted order p in err ~ C eps^p.
/// The limit is S(theta, beta kappa) when |u'(1; alpha)| <= 1e-8, else the split operator.
/// Throws NotConverged unless errors decrease over the last three eps values.
ResolventErrorReport resolvent_error(const ShapePotential& phi, const ShapePotential& psi,
                                     double alpha, double beta, std::span<const double> eps_list,
                                     const ResolventProbe& probe,
                                     const ResolventErrorOptions& options = {});

/// Named right-hand sides: "box" (1 on [1, 2]), "centered" (1 on [-1, 1]),
/// "hat" (tent on [-2, 0]), "bump" ((1 - (x - 1)^2)^2 on [0, 2]).
PiecewisePolynomial probe_function(std::string_view name);

} // namespace dplab
