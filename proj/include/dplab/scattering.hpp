#pragma once

#include "dplab/ode.hpp"
#include "dplab/potential.hpp"
#include "dplab/rates.hpp"
#include "dplab/resonance.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace dplab {

using complex = std::complex<double>;

/// Cramer-rule denominators below this magnitude are treated as poles.
inline constexpr double kDenominatorFloor = 1e-14;

/// |u'(1; alpha)| at or below this value selects the resonant limit.
inline constexpr double kResonanceTestTol = 1e-8;

/// Scattering of a wave e^{ikx} incident from the left on the squeezed potential.
struct ScatteringData {
    double k = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    complex R;
    complex T;
    double wronskian_defect = 0.0;

    double transmission() const { return std::norm(T); }
    double reflection() const { return std::norm(R); }
};

/// Scattering data of the zero-range limit.
struct LimitScattering {
    double k = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    bool resonant = false;
    complex R{-1.0, 0.0};
    complex T{0.0, 0.0};
    double theta = 0.0; ///< resonant branch only
    double kappa = 0.0; ///< resonant branch only
};

enum class Incidence { Left, Right };

/// Finite-eps R, T from the fundamental pair at s = +1 (Cramer's rule on the
/// matching system at x = -eps, +eps). Requires eps > 0, k > 0; throws
/// DegenerateDenominator on a vanishing denominator.
ScatteringData scatter_finite(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                              double beta, double eps, double k,
                              const SolverSettings& settings = {},
                              Incidence incidence = Incidence::Left);

/// Same quotients evaluated from an already computed pair (pair.eps, pair.k > 0).
ScatteringData scattering_from_pair(const FundamentalPair& pair);

/// Resonant limit:
///   R = (ik(1/th - th) + b ka) / (ik(1/th + th) - b ka),  T = 2ik / (ik(1/th + th) - b ka).
LimitScattering scatter_limit(const ResonanceRecord& rec, double beta, double k);
/// Non-resonant limit: the Dirichlet wall, R = -1, T = 0.
LimitScattering scatter_limit_split(double alpha, double beta, double k);
/// Chooses the branch by |shooting_residual(phi, alpha)| <= kResonanceTestTol.
LimitScattering scatter_limit(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                              double beta, double k);

/// |T|^2 = 4k^2 / (k^2 (1/th + th)^2 + b^2 ka^2) for a resonant record.
double transmission_probability(const ResonanceRecord& rec, double beta, double k);
/// Same formula from the maps stored in a resonant LimitScattering.
/// Throws ValidationError for the split branch.
double transmission_probability(const LimitScattering& ls);

struct SweepRow {
    double alpha = 0.0;
    double k = 0.0;
    double eps = 0.0;
    complex R;
    complex T;
    double T2 = 0.0;
};

/// One scatter_finite per (alpha, k, eps) in row-major order (alpha outermost).
/// Grid points are evaluated concurrently; rows come back in grid order.
std::vector<SweepRow> sweep(const ShapePotential& phi, const ShapePotential& psi, double beta,
                            std::span<const double> alphas, std::span<const double> ks,
                            std::span<const double> epss, const SolverSettings& settings = {});

/// Transmission probability |T_eps(k, alpha)|^2 over an alpha grid.
std::vector<SweepRow> sweep_alpha(const ShapePotential& phi, const ShapePotential& psi,
                                  double beta, double eps, double k,
                                  std::span<const double> alphas,
                                  const SolverSettings& settings = {});

struct ConvergenceRow {
    double eps = 0.0;
    double err_R = 0.0;          ///< |R_eps - R|
    double err_T = 0.0;          ///< |T_eps - T|
    double du1_over_eps = 0.0;   ///< u'_eps(1)/eps; tends to beta kappa at resonance
    double identity_residual = 0.0; ///< resonant only; see scattering_convergence
};

struct ConvergenceReport {
    LimitScattering limit;
    std::vector<ConvergenceRow> rows;
    double order_R = 0.0;
    double order_T = 0.0;
    double order = 0.0; ///< fitted to max(err_R, err_T)
};

/// Errors to below this level count as converged whatever their trend.
inline constexpr double kConvergenceFloor = 1e-10;

/// Convergence of (R_eps, T_eps) to the limit as eps runs down `eps_list`
/// (strictly decreasing, positive). At a resonant alpha each row also records
///   theta u'_eps(1) - eps beta int Psi u_eps u + eps^2 k^2 int u_eps u,
/// which vanishes identically. Throws NotConverged unless the combined error
/// decreases over the last three eps values (errors below kConvergenceFloor excepted).
ConvergenceReport scattering_convergence(const ShapePotential& phi, const ShapePotential& psi,
                                         double alpha, double beta, double k,
                                         std::span<const double> eps_list,
                                         const SolverSettings& settings = {});

/// eps = 2^-3, ..., 2^-9.
std::vector<double> default_eps_list();

} // namespace dplab
