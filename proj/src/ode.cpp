#include "dplab/ode.hpp"

#include "dplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace dplab {

void SolverSettings::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("solver tolerances must be positive");
    }
    if (!(min_step > 0.0) || !(min_step <= max_step) || !(max_step <= 2.0)) {
        throw ValidationError(fmt::format(
            "solver steps must satisfy 0 < min_step <= max_step <= 2 (got {}, {})", min_step,
            max_step));
    }
}

SolverSettings SolverSettings::tightened(double factor) const
{
    SolverSettings s = *this;
    s.rel_tol *= factor;
    s.abs_tol *= factor;
    return s;
}

EffectivePotential::EffectivePotential(std::vector<PolynomialPiece> segments)
    : segments_(std::move(segments))
{
    if (segments_.empty() || segments_.front().lo != -1.0 || segments_.back().hi != 1.0) {
        throw ValidationError("effective potential must cover [-1, 1]");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!(segments_[i].lo < segments_[i].hi)) {
            throw ValidationError("effective potential has an empty segment");
        }
        if (i > 0 && segments_[i - 1].hi != segments_[i].lo) {
            throw ValidationError("effective potential segments must be contiguous");
        }
    }
}

EffectivePotential EffectivePotential::from_shapes(const ShapePotential& phi,
                                                   const ShapePotential& psi, double alpha,
                                                   double coupling)
{
    std::vector<double> cuts{-1.0, 1.0};
    for (double b : phi.function().breakpoints()) {
        cuts.push_back(b);
    }
    for (double b : psi.function().breakpoints()) {
        cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // coefficients of the piece covering the open interval around `mid`, or none
    auto piece_coeffs = [](const ShapePotential& f, double mid) -> std::span<const double> {
        for (auto const& p : f.pieces()) {
            if (p.lo < mid && mid < p.hi) {
                return p.coeffs;
            }
        }
        return {};
    };

    std::vector<PolynomialPiece> segs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i];
        double hi = cuts[i + 1];
        double mid = 0.5 * (lo + hi);
        auto a = piece_coeffs(phi, mid);
        auto b = piece_coeffs(psi, mid);
        std::vector<double> c(std::max<std::size_t>({a.size(), b.size(), 1}), 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            c[j] += alpha * a[j];
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            c[j] += coupling * b[j];
        }
        while (c.size() > 1 && c.back() == 0.0) {
            c.pop_back();
        }
        segs.push_back(PolynomialPiece{lo, hi, std::move(c)});
    }
    return EffectivePotential(std::move(segs));
}

EffectivePotential EffectivePotential::constant(double value)
{
    return EffectivePotential({PolynomialPiece{-1.0, 1.0, {value}}});
}

double EffectivePotential::operator()(double s) const
{
    auto it = std::upper_bound(segments_.begin(), segments_.end(), s,
                               [](double v, PolynomialPiece const& p) { return v < p.lo; });
    if (it == segments_.begin()) {
        return segments_.front()(s);
    }
    return std::prev(it)->operator()(s);
}

namespace {

// sin(x)/x and sinh(x)/x with series near zero
double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double sinhc(double x)
{
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

} // namespace

std::array<double, 2> propagate_constant(double lambda, double h, double w0, double dw0)
{
    if (lambda > 0.0) {
        double r = std::sqrt(lambda);
        double x = r * h;
        double c = std::cosh(x);
        double shc = sinhc(x);
        return {c * w0 + h * shc * dw0, lambda * h * shc * w0 + c * dw0};
    }
    if (lambda < 0.0) {
        double r = std::sqrt(-lambda);
        double x = r * h;
        double c = std::cos(x);
        double snc = sinc(x);
        return {c * w0 + h * snc * dw0, lambda * h * snc * w0 + c * dw0};
    }
    return {w0 + h * dw0, dw0};
}

std::array<double, 2> DenseTrace::operator()(double s) const
{
    if (steps_.empty()) {
        return {0.0, 0.0};
    }
    auto it = std::upper_bound(steps_.begin(), steps_.end(), s,
                               [](double v, Step const& st) { return v < st.lo; });
    Step const& st = it == steps_.begin() ? steps_.front() : *std::prev(it);
    s = std::clamp(s, st.lo, st.hi);
    if (st.exact) {
        return propagate_constant(st.lambda, s - st.lo, st.w[0], st.dw[0]);
    }
    double theta = (s - st.lo) / (st.hi - st.lo);
    double theta1 = 1.0 - theta;
    auto interp = [&](std::array<double, 5> const& r) {
        return r[0] + theta * (r[1] + theta1 * (r[2] + theta * (r[3] + theta1 * r[4])));
    };
    return {interp(st.w), interp(st.dw)};
}

namespace {

// Dormand-Prince 5(4) tableau with Hairer's continuous extension.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using State = std::array<double, 2>;

struct Stepper {
    PolynomialPiece const& seg;
    double energy;

    State rhs(double s, State const& y) const { return {y[1], (seg(s) - energy) * y[0]}; }
};

void throw_if_overflow(State const& y, double s)
{
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
        throw StepUnderflow(fmt::format("solution overflowed at s = {}", s));
    }
}

} // namespace

IvpSolution integrate_ivp(const EffectivePotential& q, double energy, double w0, double dw0,
                          const SolverSettings& settings)
{
    settings.validate();
    IvpSolution out;
    std::vector<DenseTrace::Step> steps;
    State y{w0, dw0};

    for (auto const& seg : q.segments()) {
        if (settings.exact_constant_pieces && seg.degree() <= 0) {
            double lambda = (seg.coeffs.empty() ? 0.0 : seg.coeffs[0]) - energy;
            DenseTrace::Step st;
            st.lo = seg.lo;
            st.hi = seg.hi;
            st.exact = true;
            st.lambda = lambda;
            st.w[0] = y[0];
            st.dw[0] = y[1];
            steps.push_back(st);
            y = propagate_constant(lambda, seg.hi - seg.lo, y[0], y[1]);
            throw_if_overflow(y, seg.hi);
            continue;
        }

        Stepper f{seg, energy};
        double s = seg.lo;
        double h = std::min(settings.max_step, seg.hi - seg.lo);
        State k1 = f.rhs(s, y);
        while (s < seg.hi) {
            bool last = false;
            if (s + h >= seg.hi) {
                h = seg.hi - s;
                last = true;
            }
            auto axpy = [&](std::initializer_list<std::pair<double, State const*>> terms) {
                State r = y;
                for (auto const& [c, k] : terms) {
                    r[0] += h * c * (*k)[0];
                    r[1] += h * c * (*k)[1];
                }
                return r;
            };
            State k2 = f.rhs(s + c2 * h, axpy({{a21, &k1}}));
            State k3 = f.rhs(s + c3 * h, axpy({{a31, &k1}, {a32, &k2}}));
            State k4 = f.rhs(s + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            State k5 = f.rhs(s + c5 * h, axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            State k6 = f.rhs(s + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                          {a65, &k5}}));
            State y1 = axpy({{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
            double s1 = last ? seg.hi : s + h;
            State k7 = f.rhs(s1, y1);

            double err_sq = 0.0;
            double err_abs = 0.0;
            for (int i = 0; i < 2; ++i) {
                double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
                double sc = settings.abs_tol +
                            settings.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                err_sq += (e / sc) * (e / sc);
                err_abs = std::max(err_abs, std::abs(e));
            }
            double err = std::sqrt(err_sq / 2.0);
            double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);

            if (err <= 1.0 && std::isfinite(err)) {
                DenseTrace::Step st;
                st.lo = s;
                st.hi = s1;
                for (int i = 0; i < 2; ++i) {
                    auto& r = i == 0 ? st.w : st.dw;
                    double diff = y1[i] - y[i];
                    double bspl = h * k1[i] - diff;
                    r[0] = y[i];
                    r[1] = diff;
                    r[2] = bspl;
                    r[3] = diff - h * k7[i] - bspl;
                    r[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                d7 * k7[i]);
                }
                steps.push_back(st);
                throw_if_overflow(y1, s1);
                y = y1;
                k1 = k7;
                s = s1;
                out.error_estimate += err_abs;
                ++out.rk_steps;
                h = std::min(settings.max_step, h * grow);
            } else {
                ++out.rejected_steps;
                h *= std::isfinite(err) ? std::max(0.2, grow) : 0.2;
                if (h < settings.min_step) {
                    throw StepUnderflow(fmt::format(
                        "step size {} fell below min_step {} at s = {}", h, settings.min_step, s));
                }
            }
        }
    }

    out.w1 = y[0];
    out.dw1 = y[1];
    out.trace = DenseTrace(std::move(steps));
    return out;
}

namespace {

void check_pair_inputs(double eps, double k)
{
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw ValidationError(fmt::format("eps must be non-negative, got {}", eps));
    }
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw ValidationError(fmt::format("k must be non-negative, got {}", k));
    }
}

} // namespace

FundamentalSolutions fundamental_solutions(const ShapePotential& phi, const ShapePotential& psi,
                                           double alpha, double beta, double eps, double k,
                                           const SolverSettings& settings)
{
    check_pair_inputs(eps, k);
    auto q = EffectivePotential::from_shapes(phi, psi, alpha, beta * eps);
    double energy = eps * eps * k * k;

    SolverSettings current = settings;
    FundamentalSolutions out;
    for (int attempt = 0;; ++attempt) {
        auto u = integrate_ivp(q, energy, 1.0, 0.0, current);
        auto v = integrate_ivp(q, energy, 0.0, 1.0, current);
        out.pair = FundamentalPair{u.w1, u.dw1, v.w1, v.dw1,
                                   std::abs(u.w1 * v.dw1 - u.dw1 * v.w1 - 1.0),
                                   alpha, beta, eps, k};
        out.u = std::move(u.trace);
        out.v = std::move(v.trace);
        bool stepped = u.rk_steps + v.rk_steps > 0;
        if (out.pair.wronskian_defect <= kWronskianTol || !stepped || attempt == 2) {
            break;
        }
        current = current.tightened(1e-2);
    }
    return out;
}

FundamentalPair fundamental_pair(const ShapePotential& phi, const ShapePotential& psi,
                                 double alpha, double beta, double eps, double k,
                                 const SolverSettings& settings)
{
    return fundamental_solutions(phi, psi, alpha, beta, eps, k, settings).pair;
}

} // namespace dplab
