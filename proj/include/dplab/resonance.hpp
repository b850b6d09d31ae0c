#pragma once

#include "dplab/ode.hpp"
#include "dplab/potential.hpp"

#include <array>
#include <functional>
#include <vector>

namespace dplab {

/// Tighter than the scattering defaults: root refinement needs u'(1) well below root_tol.
SolverSettings resonance_solver_settings();

/// Shooting residual u'(1; alpha) for  -u'' + alpha Phi u = 0,  u(-1) = 1, u'(-1) = 0.
/// Vanishes exactly when alpha Phi has a half-bound state.
double shooting_residual(const ShapePotential& phi, double alpha,
                         const SolverSettings& settings = resonance_solver_settings());

struct ScanOptions {
    double alpha_min = -50.0;
    double alpha_max = 50.0;
    double step = 0.05;
    double root_tol = 1e-10;
    SolverSettings settings = resonance_solver_settings();

    void validate() const;
};

/// A resonant coupling constant together with its half-bound state data.
struct ResonanceRecord {
    double alpha = 0.0;
    double theta = 1.0; ///< u(+1)/u(-1)
    double kappa = 0.0; ///< (u(-1)u(+1))^-1 int Psi u^2
    DenseTrace half_bound_trace; ///< u with u(-1) = 1
    double residual = 0.0;       ///< |u'(1)| at alpha
};

struct ResonantSet {
    std::vector<ResonanceRecord> records; ///< strictly increasing alpha
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double step = 0.0;
    /// Grid points where |residual| has a local minimum below sqrt(root_tol)
    /// without a sign change: possible tangential (double) roots, not recorded.
    std::vector<double> tangential_warnings;
};

/// The resonant couplings of Phi inside the scan window, ascending.
///
/// Sign changes of the shooting residual on the grid are refined by bisection
/// to |dalpha| <= root_tol and polished by one secant step inside the bracket.
/// alpha = 0 is always included when the window contains it. Throws ZeroShape
/// for Phi = 0, where every alpha is resonant.
std::vector<double> find_resonant_couplings(const ShapePotential& phi, const ScanOptions& opts,
                                            std::vector<double>* tangential = nullptr);

/// find_resonant_couplings followed by the resonant and intercoupling maps for each root.
ResonantSet scan_resonances(const ShapePotential& phi, const ShapePotential& psi,
                            const ScanOptions& opts = {});

/// Half-bound state data at a resonant alpha. Throws NotResonant when
/// |shooting_residual(phi, alpha)| > root_tol.
ResonanceRecord resonance_record(const ShapePotential& phi, const ShapePotential& psi,
                                 double alpha, double root_tol = 1e-10,
                                 const SolverSettings& settings = resonance_solver_settings());

struct ResonantMaps {
    double theta = 0.0;
    double kappa = 0.0;
};

/// theta = u(1)/u(-1) and kappa = (u(-1)u(1))^-1 int Psi u^2 for any half-bound state u,
/// integrated by 16-point Gauss panels split at `cuts` and at Psi's breakpoints.
ResonantMaps resonant_maps(const std::function<double(double)>& u, const ShapePotential& psi,
                           std::span<const double> cuts = {});

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// [[theta, 0], [beta kappa, 1/theta]]: the point-interaction matrix of the resonant limit.
Matrix2 coupling_matrix(const ResonanceRecord& rec, double beta);

/// [[(2+a)/(2-a), 0], [4b/(2-a)^2, (2-a)/(2+a)]], the matrix obtained from the
/// mean-value product rule for delta and delta'. Throws SingularAlpha at alpha = +-2.
Matrix2 kurasov_matrix(double alpha, double beta);

inline double determinant(const Matrix2& m)
{
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

} // namespace dplab
