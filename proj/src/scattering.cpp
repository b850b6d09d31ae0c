#include "dplab/scattering.hpp"

#include "dplab/errors.hpp"
#include "dplab/parallel.hpp"
#include "dplab/quadrature.hpp"
#include "dplab/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace dplab {

namespace {

constexpr complex I{0.0, 1.0};

void require_positive(double v, char const* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(fmt::format("{} must be positive and finite, got {}", name, v));
    }
}

} // namespace

ScatteringData scattering_from_pair(const FundamentalPair& p)
{
    require_positive(p.eps, "eps");
    require_positive(p.k, "k");
    double ek = p.eps * p.k;
    complex phase = std::exp(-2.0 * I * ek);
    complex num = p.du1 - I * ek * (p.u1 - p.dv1) + ek * ek * p.v1;
    complex den = p.du1 - I * ek * (p.u1 + p.dv1) - ek * ek * p.v1;
    if (std::abs(den) < kDenominatorFloor) {
        throw DegenerateDenominator(fmt::format(
            "scattering denominator {} vanishes (alpha = {}, eps = {}, k = {})", std::abs(den),
            p.alpha, p.eps, p.k));
    }
    ScatteringData out;
    out.k = p.k;
    out.alpha = p.alpha;
    out.beta = p.beta;
    out.eps = p.eps;
    out.R = -phase * num / den;
    out.T = -phase * (2.0 * I * ek) / den;
    out.wronskian_defect = p.wronskian_defect;
    return out;
}

ScatteringData scatter_finite(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                              double beta, double eps, double k, const SolverSettings& settings,
                              Incidence incidence)
{
    require_positive(eps, "eps");
    require_positive(k, "k");
    if (incidence == Incidence::Right) {
        return scatter_finite(phi.reflected(), psi.reflected(), alpha, beta, eps, k, settings,
                              Incidence::Left);
    }
    return scattering_from_pair(fundamental_pair(phi, psi, alpha, beta, eps, k, settings));
}

LimitScattering scatter_limit(const ResonanceRecord& rec, double beta, double k)
{
    require_positive(k, "k");
    LimitScattering out;
    out.k = k;
    out.alpha = rec.alpha;
    out.beta = beta;
    out.resonant = true;
    out.theta = rec.theta;
    out.kappa = rec.kappa;
    double inv = 1.0 / rec.theta;
    double bk = beta * rec.kappa;
    complex den = I * k * (inv + rec.theta) - bk;
    out.R = (I * k * (inv - rec.theta) + bk) / den;
    out.T = 2.0 * I * k / den;
    return out;
}

LimitScattering scatter_limit_split(double alpha, double beta, double k)
{
    require_positive(k, "k");
    LimitScattering out;
    out.k = k;
    out.alpha = alpha;
    out.beta = beta;
    return out;
}

LimitScattering scatter_limit(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                              double beta, double k)
{
    if (std::abs(shooting_residual(phi, alpha)) <= kResonanceTestTol) {
        return scatter_limit(resonance_record(phi, psi, alpha, kResonanceTestTol), beta, k);
    }
    return scatter_limit_split(alpha, beta, k);
}

double transmission_probability(const ResonanceRecord& rec, double beta, double k)
{
    double s = 1.0 / rec.theta + rec.theta;
    double bk = beta * rec.kappa;
    return 4.0 * k * k / (k * k * s * s + bk * bk);
}

double transmission_probability(const LimitScattering& ls)
{
    if (!ls.resonant) {
        throw ValidationError("transmission_probability needs a resonant limit");
    }
    ResonanceRecord rec;
    rec.theta = ls.theta;
    rec.kappa = ls.kappa;
    return transmission_probability(rec, ls.beta, ls.k);
}

std::vector<SweepRow> sweep(const ShapePotential& phi, const ShapePotential& psi, double beta,
                            std::span<const double> alphas, std::span<const double> ks,
                            std::span<const double> epss, const SolverSettings& settings)
{
    std::size_t n = alphas.size() * ks.size() * epss.size();
    std::vector<SweepRow> rows(n);
    parallel_for(n, [&](std::size_t idx) {
        std::size_t ie = idx % epss.size();
        std::size_t ik = (idx / epss.size()) % ks.size();
        std::size_t ia = idx / (epss.size() * ks.size());
        auto d = scatter_finite(phi, psi, alphas[ia], beta, epss[ie], ks[ik], settings);
        rows[idx] = SweepRow{alphas[ia], ks[ik], epss[ie], d.R, d.T, d.transmission()};
    });
    return rows;
}

std::vector<SweepRow> sweep_alpha(const ShapePotential& phi, const ShapePotential& psi,
                                  double beta, double eps, double k,
                                  std::span<const double> alphas, const SolverSettings& settings)
{
    std::array<double, 1> ks{k};
    std::array<double, 1> es{eps};
    return sweep(phi, psi, beta, alphas, ks, es, settings);
}

std::vector<double> default_eps_list()
{
    std::vector<double> out;
    for (int p = 3; p <= 9; ++p) {
        out.push_back(std::ldexp(1.0, -p));
    }
    return out;
}

namespace {

void check_eps_list(std::span<const double> eps_list)
{
    if (eps_list.empty()) {
        throw ValidationError("eps list is empty");
    }
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        require_positive(eps_list[i], "eps");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
            throw ValidationError("eps list must be strictly decreasing");
        }
    }
}

} // namespace

ConvergenceReport scattering_convergence(const ShapePotential& phi, const ShapePotential& psi,
                                         double alpha, double beta, double k,
                                         std::span<const double> eps_list,
                                         const SolverSettings& settings)
{
    check_eps_list(eps_list);
    require_positive(k, "k");

    ConvergenceReport report;
    std::optional<ResonanceRecord> rec;
    if (std::abs(shooting_residual(phi, alpha)) <= kResonanceTestTol) {
        rec = resonance_record(phi, psi, alpha, kResonanceTestTol);
        report.limit = scatter_limit(*rec, beta, k);
    } else {
        report.limit = scatter_limit_split(alpha, beta, k);
    }

    std::vector<double> cuts = phi.function().breakpoints();
    for (double b : psi.function().breakpoints()) {
        cuts.push_back(b);
    }

    report.rows.resize(eps_list.size());
    parallel_for(eps_list.size(), [&](std::size_t i) {
        double eps = eps_list[i];
        auto sol = fundamental_solutions(phi, psi, alpha, beta, eps, k, settings);
        auto d = scattering_from_pair(sol.pair);
        ConvergenceRow row;
        row.eps = eps;
        row.err_R = std::abs(d.R - report.limit.R);
        row.err_T = std::abs(d.T - report.limit.T);
        row.du1_over_eps = sol.pair.du1 / eps;
        if (rec) {
            auto const& u = rec->half_bound_trace;
            auto const& ue = sol.u;
            double psi_int = composite_gauss(
                [&](double s) { return psi(s) * ue.value(s) * u.value(s); }, -1.0, 1.0, cuts,
                0.125);
            double plain_int = composite_gauss(
                [&](double s) { return ue.value(s) * u.value(s); }, -1.0, 1.0, cuts, 0.125);
            row.identity_residual = rec->theta * sol.pair.du1 - eps * beta * psi_int +
                                    eps * eps * k * k * plain_int;
        }
        report.rows[i] = row;
    });

    std::vector<double> es, eR, eT, eM;
    for (auto const& r : report.rows) {
        es.push_back(r.eps);
        eR.push_back(r.err_R);
        eT.push_back(r.err_T);
        eM.push_back(std::max(r.err_R, r.err_T));
    }
    report.order_R = fitted_order(es, eR);
    report.order_T = fitted_order(es, eT);
    report.order = fitted_order(es, eM);
    require_decreasing_tail(eM, kConvergenceFloor, "scattering_convergence");
    return report;
}

} // namespace dplab
