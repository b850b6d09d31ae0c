#include "dplab/resonance.hpp"

#include "dplab/errors.hpp"
#include "dplab/parallel.hpp"
#include "dplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace dplab {

SolverSettings resonance_solver_settings()
{
    SolverSettings s;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-14;
    return s;
}

double shooting_residual(const ShapePotential& phi, double alpha, const SolverSettings& settings)
{
    auto q = EffectivePotential::from_shapes(phi, ShapePotential::zero(), alpha, 0.0);
    return integrate_ivp(q, 0.0, 1.0, 0.0, settings).dw1;
}

void ScanOptions::validate() const
{
    if (!(step > 0.0) || !(root_tol > 0.0)) {
        throw ValidationError("scan step and root_tol must be positive");
    }
    if (!(alpha_min <= alpha_max) || !std::isfinite(alpha_min) || !std::isfinite(alpha_max)) {
        throw ValidationError(
            fmt::format("scan window [{}, {}] is not a finite interval", alpha_min, alpha_max));
    }
    settings.validate();
}

namespace {

std::vector<double> scan_grid(const ScanOptions& opts)
{
    std::vector<double> grid;
    auto n = static_cast<std::size_t>(std::floor((opts.alpha_max - opts.alpha_min) / opts.step));
    for (std::size_t i = 0; i <= n; ++i) {
        grid.push_back(opts.alpha_min + static_cast<double>(i) * opts.step);
    }
    if (grid.back() < opts.alpha_max) {
        grid.push_back(opts.alpha_max);
    }
    if (opts.alpha_min <= 0.0 && 0.0 <= opts.alpha_max) {
        // snap the nearest grid point onto zero so that it is sampled exactly
        auto it = std::min_element(grid.begin(), grid.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        if (std::abs(*it) < 0.5 * opts.step) {
            *it = 0.0;
        } else {
            grid.insert(std::upper_bound(grid.begin(), grid.end(), 0.0), 0.0);
        }
    }
    return grid;
}

double refine_root(const ShapePotential& phi, double a, double ra, double b, double rb,
                   const ScanOptions& opts)
{
    while (b - a > opts.root_tol) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) {
            break;
        }
        double rm = shooting_residual(phi, m, opts.settings);
        if (rm == 0.0) {
            return m;
        }
        if ((rm < 0.0) == (ra < 0.0)) {
            a = m;
            ra = rm;
        } else {
            b = m;
            rb = rm;
        }
    }
    double secant = a - ra * (b - a) / (rb - ra);
    if (!(secant >= a && secant <= b)) {
        secant = std::abs(ra) < std::abs(rb) ? a : b;
    }
    return secant;
}

} // namespace

std::vector<double> find_resonant_couplings(const ShapePotential& phi, const ScanOptions& opts,
                                            std::vector<double>* tangential)
{
    opts.validate();
    if (phi.is_zero()) {
        throw ZeroShape("Phi vanishes identically: every coupling constant is resonant");
    }

    auto grid = scan_grid(opts);
    std::vector<double> res(grid.size());
    parallel_for(grid.size(),
                 [&](std::size_t i) { res[i] = shooting_residual(phi, grid[i], opts.settings); });

    std::vector<double> roots;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (res[i] == 0.0 || grid[i] == 0.0) {
            roots.push_back(grid[i]);
            continue;
        }
        if (i + 1 < grid.size() && res[i + 1] != 0.0 && grid[i + 1] != 0.0 &&
            (res[i] < 0.0) != (res[i + 1] < 0.0)) {
            roots.push_back(refine_root(phi, grid[i], res[i], grid[i + 1], res[i + 1], opts));
        }
    }

    if (tangential) {
        tangential->clear();
        double limit = std::sqrt(opts.root_tol);
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            bool near_zero = grid[i - 1] == 0.0 || grid[i] == 0.0 || grid[i + 1] == 0.0;
            bool same_sign = (res[i - 1] < 0.0) == (res[i] < 0.0) &&
                             (res[i] < 0.0) == (res[i + 1] < 0.0);
            double m = std::abs(res[i]);
            if (!near_zero && same_sign && m < limit && m <= std::abs(res[i - 1]) &&
                m <= std::abs(res[i + 1])) {
                tangential->push_back(grid[i]);
            }
        }
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

ResonantMaps resonant_maps(const std::function<double(double)>& u, const ShapePotential& psi,
                           std::span<const double> cuts)
{
    double um = u(-1.0);
    double up = u(1.0);
    if (um == 0.0 || up == 0.0) {
        throw NumericalError("half-bound state vanishes at an end of [-1, 1]");
    }
    std::vector<double> all(cuts.begin(), cuts.end());
    for (double b : psi.function().breakpoints()) {
        all.push_back(b);
    }
    double integral = 0.0;
    if (!psi.is_zero()) {
        integral = composite_gauss(
            [&](double s) {
                double v = u(s);
                return psi(s) * v * v;
            },
            -1.0, 1.0, all, 0.125);
    }
    return {up / um, integral / (um * up)};
}

namespace {

ResonanceRecord build_record(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                             const SolverSettings& settings)
{
    auto q = EffectivePotential::from_shapes(phi, ShapePotential::zero(), alpha, 0.0);
    auto sol = integrate_ivp(q, 0.0, 1.0, 0.0, settings);
    ResonanceRecord rec;
    rec.alpha = alpha;
    rec.residual = std::abs(sol.dw1);
    rec.half_bound_trace = std::move(sol.trace);
    auto const& trace = rec.half_bound_trace;
    auto cuts = phi.function().breakpoints();
    auto maps = resonant_maps([&](double s) { return trace.value(s); }, psi, cuts);
    rec.theta = maps.theta;
    rec.kappa = maps.kappa;
    return rec;
}

} // namespace

ResonantSet scan_resonances(const ShapePotential& phi, const ShapePotential& psi,
                            const ScanOptions& opts)
{
    ResonantSet set;
    set.alpha_min = opts.alpha_min;
    set.alpha_max = opts.alpha_max;
    set.step = opts.step;
    auto roots = find_resonant_couplings(phi, opts, &set.tangential_warnings);
    set.records.resize(roots.size());
    parallel_for(roots.size(), [&](std::size_t i) {
        set.records[i] = build_record(phi, psi, roots[i], opts.settings);
    });
    return set;
}

ResonanceRecord resonance_record(const ShapePotential& phi, const ShapePotential& psi,
                                 double alpha, double root_tol, const SolverSettings& settings)
{
    auto rec = build_record(phi, psi, alpha, settings);
    if (!(rec.residual <= root_tol)) {
        throw NotResonant(fmt::format("alpha = {} is not resonant: |u'(1)| = {} > {}", alpha,
                                      rec.residual, root_tol));
    }
    return rec;
}

Matrix2 coupling_matrix(const ResonanceRecord& rec, double beta)
{
    return {{{rec.theta, 0.0}, {beta * rec.kappa, 1.0 / rec.theta}}};
}

Matrix2 kurasov_matrix(double alpha, double beta)
{
    if (std::abs(alpha - 2.0) < 1e-12 || std::abs(alpha + 2.0) < 1e-12) {
        throw SingularAlpha(fmt::format("comparison matrix is singular at alpha = {}", alpha));
    }
    double m = 2.0 - alpha;
    double p = 2.0 + alpha;
    return {{{p / m, 0.0}, {4.0 * beta / (m * m), m / p}}};
}

} // namespace dplab
