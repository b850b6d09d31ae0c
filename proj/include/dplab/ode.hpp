#pragma once

#include "dplab/potential.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace dplab {

/// Wronskian defect above which a fundamental pair is re-solved with tighter tolerances.
inline constexpr double kWronskianTol = 1e-8;

struct SolverSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.05;
    double min_step = 1e-10;
    /// Propagate constant segments with the closed-form cos/cosh solution instead of stepping.
    bool exact_constant_pieces = true;

    /// Throws ValidationError unless 0 < min_step <= max_step <= 2 and tolerances > 0.
    void validate() const;
    /// Same settings with both tolerances multiplied by `factor`.
    SolverSettings tightened(double factor) const;
};

/// Coefficient q(s) of  -w'' + q w = E w  on [-1, 1], as contiguous polynomial segments.
class EffectivePotential {
public:
    /// Segments must tile [-1, 1] without gaps.
    explicit EffectivePotential(std::vector<PolynomialPiece> segments);

    /// q = alpha Phi + coupling Psi. Gaps in the shapes become zero segments.
    static EffectivePotential from_shapes(const ShapePotential& phi, const ShapePotential& psi,
                                          double alpha, double coupling);
    static EffectivePotential constant(double value);

    double operator()(double s) const;
    std::span<const PolynomialPiece> segments() const { return segments_; }

private:
    std::vector<PolynomialPiece> segments_;
};

/// Evaluable solution (w, w') on [-1, 1] assembled from accepted steps.
class DenseTrace {
public:
    /// One accepted step: closed form for constant coefficient, else a quartic
    /// continuous extension per component.
    struct Step {
        double lo = 0.0;
        double hi = 0.0;
        bool exact = false;
        double lambda = 0.0;               ///< q - E on an exact step
        std::array<double, 5> w{};         ///< exact: w[0] = w(lo); else interpolation data
        std::array<double, 5> dw{};
    };

    DenseTrace() = default;
    explicit DenseTrace(std::vector<Step> steps) : steps_(std::move(steps)) {}

    std::array<double, 2> operator()(double s) const;
    double value(double s) const { return (*this)(s)[0]; }
    double derivative(double s) const { return (*this)(s)[1]; }

    std::span<const Step> steps() const { return steps_; }
    bool empty() const { return steps_.empty(); }

private:
    std::vector<Step> steps_;
};

struct IvpSolution {
    double w1 = 0.0;  ///< w(+1)
    double dw1 = 0.0; ///< w'(+1)
    DenseTrace trace;
    /// Sum of the absolute local-error estimates over all accepted Runge-Kutta steps.
    double error_estimate = 0.0;
    std::size_t rk_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Closed-form propagation of (w, w') across length h of  w'' = lambda w.
std::array<double, 2> propagate_constant(double lambda, double h, double w0, double dw0);

/// Solve  -w'' + q w = E w  on [-1, 1] from (w, w')(-1) = (w0, dw0).
///
/// Steps never cross a segment boundary of q. Throws StepUnderflow when the
/// controller needs a step below settings.min_step or the solution overflows.
IvpSolution integrate_ivp(const EffectivePotential& q, double energy, double w0, double dw0,
                          const SolverSettings& settings = {});

/// Boundary traces at s = +1 of the solutions u, v of
///   -w'' + alpha Phi w + beta eps Psi w = eps^2 k^2 w
/// with u(-1) = 1, u'(-1) = 0 and v(-1) = 0, v'(-1) = 1.
struct FundamentalPair {
    double u1 = 0.0;
    double du1 = 0.0;
    double v1 = 0.0;
    double dv1 = 0.0;
    double wronskian_defect = 0.0; ///< |u1 dv1 - du1 v1 - 1|
    double alpha = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    double k = 0.0;
};

struct FundamentalSolutions {
    FundamentalPair pair;
    DenseTrace u;
    DenseTrace v;
};

/// Requires eps >= 0 and k >= 0. Solves again with tolerances tightened 100x
/// (twice at most) while the Wronskian defect exceeds kWronskianTol.
FundamentalSolutions fundamental_solutions(const ShapePotential& phi, const ShapePotential& psi,
                                           double alpha, double beta, double eps, double k,
                                           const SolverSettings& settings = {});

FundamentalPair fundamental_pair(const ShapePotential& phi, const ShapePotential& psi,
                                 double alpha, double beta, double eps, double k,
                                 const SolverSettings& settings = {});

} // namespace dplab
