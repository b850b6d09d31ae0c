#include "dplab/resolvent.hpp"

#include "dplab/errors.hpp"
#include "dplab/parallel.hpp"
#include "dplab/rates.hpp"
#include "dplab/resonance.hpp"
#include "dplab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace dplab {

using cplx = std::complex<double>;

namespace {

constexpr cplx I{0.0, 1.0};

/// int_a^b p(t) e^{c (t - shift)} dt through the antiderivative
/// e^{c(t - shift)} sum_k (-1)^k p^(k)(t) / c^(k+1).
cplx exp_poly_integral(std::span<const double> coeffs, cplx c, double a, double b, double shift)
{
    auto antiderivative = [&](double t) {
        std::vector<double> d(coeffs.begin(), coeffs.end());
        cplx sum = 0.0;
        cplx cpow = c;
        double sign = 1.0;
        while (!d.empty()) {
            sum += sign * polyval(d, t) / cpow;
            for (std::size_t j = 1; j < d.size(); ++j) {
                d[j - 1] = static_cast<double>(j) * d[j];
            }
            d.pop_back();
            cpow *= c;
            sign = -sign;
        }
        return std::exp(c * (t - shift)) * sum;
    };
    return antiderivative(b) - antiderivative(a);
}

} // namespace

LimitOperator LimitOperator::resonant(double mu, double nu)
{
    if (mu == 0.0 || !std::isfinite(mu) || !std::isfinite(nu)) {
        throw ValidationError("resonant limit operator needs finite mu != 0 and finite nu");
    }
    return {Kind::Resonant, mu, nu};
}

void ResolventProbe::validate() const
{
    if (zeta.imag() == 0.0) {
        throw ValidationError("spectral point zeta must have a nonzero imaginary part");
    }
    if (!(half_width >= 4.0)) {
        throw ValidationError(fmt::format("half width L = {} must be at least 4", half_width));
    }
    if (!(grid_step > 0.0) || grid_step > half_width) {
        throw ValidationError(fmt::format("grid step {} is out of range", grid_step));
    }
    if (!f.empty() && (f.support_lo() <= -half_width || f.support_hi() >= half_width)) {
        throw ValidationError("right-hand side must be supported strictly inside (-L, L)");
    }
}

LimitResolvent::LimitResolvent(LimitOperator op, PiecewisePolynomial f, cplx zeta)
    : op_(op), f_(std::move(f)), zeta_(zeta)
{
    if (zeta.imag() == 0.0) {
        throw ValidationError("spectral point zeta must have a nonzero imaginary part");
    }
    omega_ = std::sqrt(zeta);
    if (omega_.imag() < 0.0) {
        omega_ = -omega_;
    }

    auto [lo, up] = tails(0.0);
    cplx p = I / (2.0 * omega_) * (lo + up);
    cplx dp = -0.5 * (lo - up);
    if (op_.kind == LimitOperator::Kind::NonResonantSplit) {
        a_ = -p;
        b_ = -p;
        return;
    }
    double mu = op_.mu;
    double nu = op_.nu;
    cplx den = I * omega_ * (mu + 1.0 / mu) - nu;
    a_ = ((1.0 / mu - 1.0) * dp + nu * p - I * omega_ * (mu - 1.0) * p) / den;
    b_ = (mu - 1.0) * p + mu * a_;
}

std::pair<cplx, cplx> LimitResolvent::tails(double x) const
{
    cplx lower = 0.0;
    cplx upper = 0.0;
    for (auto const& piece : f_.pieces()) {
        if (piece.lo < x) {
            lower += exp_poly_integral(piece.coeffs, -I * omega_, piece.lo, std::min(piece.hi, x),
                                       x);
        }
        if (piece.hi > x) {
            upper += exp_poly_integral(piece.coeffs, I * omega_, std::max(piece.lo, x), piece.hi,
                                       x);
        }
    }
    return {lower, upper};
}

cplx LimitResolvent::value_side(double x, bool right) const
{
    auto [lo, up] = tails(x);
    cplx yp = I / (2.0 * omega_) * (lo + up);
    return yp + (right ? b_ * std::exp(I * omega_ * x) : a_ * std::exp(-I * omega_ * x));
}

cplx LimitResolvent::derivative_side(double x, bool right) const
{
    auto [lo, up] = tails(x);
    cplx dyp = -0.5 * (lo - up);
    return dyp + (right ? I * omega_ * b_ * std::exp(I * omega_ * x)
                        : -I * omega_ * a_ * std::exp(-I * omega_ * x));
}

cplx LimitResolvent::value(double x) const
{
    return value_side(x, x >= 0.0);
}

cplx LimitResolvent::derivative(double x) const
{
    return derivative_side(x, x >= 0.0);
}

cplx LimitResolvent::second_derivative(double x) const
{
    return -zeta_ * value(x) - f_(x);
}

namespace {

ResolventTrace make_grid(const ResolventProbe& probe)
{
    double L = probe.half_width;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * L / probe.grid_step - 1e-9));
    ResolventTrace t;
    t.h = 2.0 * L / static_cast<double>(n);
    t.x.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        t.x[j] = -L + static_cast<double>(j) * t.h;
    }
    t.x[n] = L;
    t.y.assign(n + 1, 0.0);
    return t;
}

} // namespace

ResolventTrace solve_limit_resolvent(const LimitOperator& op, const ResolventProbe& probe)
{
    probe.validate();
    LimitResolvent sol(op, probe.f, probe.zeta);
    auto t = make_grid(probe);
    for (std::size_t j = 0; j < t.x.size(); ++j) {
        t.y[j] = sol.value(t.x[j]);
    }
    return t;
}

ResolventTrace solve_eps_resolvent(const ShapePotential& phi, const ShapePotential& psi,
                                   double alpha, double beta, double eps,
                                   const ResolventProbe& probe, OuterBoundary boundary)
{
    probe.validate();
    if (!(eps > 0.0)) {
        throw ValidationError(fmt::format("eps must be positive, got {}", eps));
    }
    if (probe.grid_step > eps / 32.0 * (1.0 + 1e-12)) {
        throw ValidationError(
            fmt::format("grid step {} exceeds eps/32 = {}", probe.grid_step, eps / 32.0));
    }
    if (eps >= probe.half_width - 2.0 * probe.grid_step) {
        throw ValidationError("potential support reaches the edge of the grid");
    }

    auto t = make_grid(probe);
    double h = t.h;
    std::size_t n = t.x.size();
    cplx zeta = probe.zeta;

    std::size_t first = boundary == OuterBoundary::Dirichlet ? 1 : 0;
    std::size_t last = boundary == OuterBoundary::Dirichlet ? n - 2 : n - 1;
    std::size_t m = last - first + 1;

    TridiagonalSystem sys;
    sys.lower.assign(m, -1.0 / (h * h));
    sys.upper.assign(m, -1.0 / (h * h));
    sys.diag.resize(m);
    std::vector<cplx> rhs(m);
    for (std::size_t r = 0; r < m; ++r) {
        std::size_t j = first + r;
        double a = t.x[j] - 0.5 * h;
        double b = t.x[j] + 0.5 * h;
        double v = 0.0;
        if (b > -eps && a < eps) {
            v = squeezed_integral(phi, psi, alpha, beta, eps, a, b) / h;
        }
        sys.diag[r] = 2.0 / (h * h) + v - zeta;
        rhs[r] = probe.f.integral(a, b) / h;
    }
    if (boundary == OuterBoundary::Transparent) {
        // ghost values y_{-1} = lambda y_0 and y_{N+1} = lambda y_N, |lambda| < 1
        cplx bq = 2.0 - zeta * h * h;
        cplx disc = std::sqrt(bq * bq - 4.0);
        cplx lambda = 0.5 * (bq - disc);
        if (std::abs(lambda) > 1.0) {
            lambda = 0.5 * (bq + disc);
        }
        sys.diag.front() -= lambda / (h * h);
        sys.diag.back() -= lambda / (h * h);
    }

    auto sol = solve_tridiagonal(sys, rhs);
    for (std::size_t r = 0; r < m; ++r) {
        t.y[first + r] = sol.x[r];
    }
    return t;
}

double discrete_l2(const ResolventTrace& t, double exclude)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < t.x.size(); ++j) {
        if (std::abs(t.x[j]) > exclude) {
            acc += std::norm(t.y[j]);
        }
    }
    return std::sqrt(t.h * acc);
}

double discrete_l2_distance(const ResolventTrace& a, const ResolventTrace& b, double exclude)
{
    if (a.x.size() != b.x.size()) {
        throw ValidationError("traces live on different grids");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < a.x.size(); ++j) {
        if (std::abs(a.x[j]) > exclude) {
            acc += std::norm(a.y[j] - b.y[j]);
        }
    }
    return std::sqrt(a.h * acc);
}

ResolventErrorReport resolvent_error(const ShapePotential& phi, const ShapePotential& psi,
                                     double alpha, double beta, std::span<const double> eps_list,
                                     const ResolventProbe& probe,
                                     const ResolventErrorOptions& options)
{
    if (eps_list.empty()) {
        throw ValidationError("eps list is empty");
    }
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
            throw ValidationError("eps list must be positive and strictly decreasing");
        }
    }
    if (!(options.cells_per_eps >= 32.0)) {
        throw ValidationError("cells_per_eps must be at least 32");
    }
    probe.validate();

    ResolventErrorReport report;
    if (std::abs(shooting_residual(phi, alpha)) <= 1e-8) {
        auto rec = resonance_record(phi, psi, alpha, 1e-8);
        report.limit = LimitOperator::resonant(rec.theta, beta * rec.kappa);
    } else {
        report.limit = LimitOperator::split();
    }
    LimitResolvent limit(report.limit, probe.f, probe.zeta);

    report.rows.resize(eps_list.size());
    parallel_for(eps_list.size(), [&](std::size_t i) {
        double eps = eps_list[i];
        ResolventProbe p = probe;
        p.grid_step = eps / options.cells_per_eps;
        auto y_eps = solve_eps_resolvent(phi, psi, alpha, beta, eps, p, options.boundary);
        ResolventTrace y = y_eps;
        for (std::size_t j = 0; j < y.x.size(); ++j) {
            y.y[j] = limit.value(y.x[j]);
        }
        report.rows[i] = ResolventErrorRow{eps, y_eps.h,
                                           discrete_l2_distance(y_eps, y, eps * (1.0 + 1e-12)),
                                           discrete_l2(y_eps)};
    });

    std::vector<double> es;
    std::vector<double> errs;
    for (auto const& r : report.rows) {
        es.push_back(r.eps);
        errs.push_back(r.error_l2);
    }
    report.order = fitted_order(es, errs);
    double f2 = 0.0;
    for (auto const& piece : probe.f.pieces()) {
        std::vector<double> sq(2 * piece.coeffs.size() - 1, 0.0);
        for (std::size_t a = 0; a < piece.coeffs.size(); ++a) {
            for (std::size_t b = 0; b < piece.coeffs.size(); ++b) {
                sq[a + b] += piece.coeffs[a] * piece.coeffs[b];
            }
        }
        f2 += polyint(sq, piece.lo, piece.hi);
    }
    report.norm_f = std::sqrt(f2);
    require_decreasing_tail(errs, options.floor, "resolvent_error");
    return report;
}

PiecewisePolynomial probe_function(std::string_view name)
{
    if (name == "box") {
        return PiecewisePolynomial({PolynomialPiece{1.0, 2.0, {1.0}}});
    }
    if (name == "centered") {
        return PiecewisePolynomial({PolynomialPiece{-1.0, 1.0, {1.0}}});
    }
    if (name == "hat") {
        return PiecewisePolynomial(
            {PolynomialPiece{-2.0, -1.0, {2.0, 1.0}}, PolynomialPiece{-1.0, 0.0, {0.0, -1.0}}});
    }
    if (name == "bump") {
        // (1 - (x-1)^2)^2 = (2x - x^2)^2 = 4x^2 - 4x^3 + x^4
        return PiecewisePolynomial({PolynomialPiece{0.0, 2.0, {0.0, 0.0, 4.0, -4.0, 1.0}}});
    }
    throw ValidationError(fmt::format("unknown probe function '{}'", name));
}

} // namespace dplab
