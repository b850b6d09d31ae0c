#include "dplab/potential.hpp"

#include "dplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace dplab {

double polyval(std::span<const double> coeffs, double x)
{
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double polyint(std::span<const double> coeffs, double a, double b)
{
    // Horner on the antiderivative: sum_j c_j x^{j+1}/(j+1)
    double fa = 0.0;
    double fb = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        double c = coeffs[j] / static_cast<double>(j + 1);
        fa = fa * a + c;
        fb = fb * b + c;
    }
    return fb * b - fa * a;
}

int PolynomialPiece::degree() const
{
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        if (coeffs[j] != 0.0) {
            return static_cast<int>(j);
        }
    }
    return -1;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolynomialPiece> pieces)
    : pieces_(std::move(pieces))
{
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        auto const& p = pieces_[i];
        if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi)) {
            throw ValidationError(
                fmt::format("piece {}: interval [{}, {}] must satisfy lo < hi", i, p.lo, p.hi));
        }
        if (p.coeffs.empty()) {
            throw ValidationError(fmt::format("piece {}: no coefficients", i));
        }
        if (p.coeffs.size() > static_cast<std::size_t>(kMaxPieceDegree + 1)) {
            throw ValidationError(fmt::format("piece {}: degree {} exceeds {}", i,
                                              p.coeffs.size() - 1, kMaxPieceDegree));
        }
        for (double c : p.coeffs) {
            if (!std::isfinite(c)) {
                throw ValidationError(fmt::format("piece {}: non-finite coefficient", i));
            }
        }
        if (i > 0 && pieces_[i - 1].hi > p.lo) {
            throw ValidationError(
                fmt::format("pieces {} and {} overlap or are out of order", i - 1, i));
        }
    }
}

double PiecewisePolynomial::operator()(double x) const
{
    // last piece with lo <= x
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, PolynomialPiece const& p) { return v < p.lo; });
    if (it == pieces_.begin()) {
        return 0.0;
    }
    auto const& p = *std::prev(it);
    return x <= p.hi ? p(x) : 0.0;
}

double PiecewisePolynomial::integral(double a, double b) const
{
    if (a > b) {
        return -integral(b, a);
    }
    double total = 0.0;
    for (auto const& p : pieces_) {
        double lo = std::max(a, p.lo);
        double hi = std::min(b, p.hi);
        if (lo < hi) {
            total += polyint(p.coeffs, lo, hi);
        }
    }
    return total;
}

double PiecewisePolynomial::moment(int order) const
{
    double total = 0.0;
    std::vector<double> shifted;
    for (auto const& p : pieces_) {
        shifted.assign(static_cast<std::size_t>(order), 0.0);
        shifted.insert(shifted.end(), p.coeffs.begin(), p.coeffs.end());
        total += polyint(shifted, p.lo, p.hi);
    }
    return total;
}

bool PiecewisePolynomial::is_zero() const
{
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](auto const& p) { return p.degree() < 0; });
}

bool PiecewisePolynomial::is_piecewise_constant() const
{
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](auto const& p) { return p.degree() <= 0; });
}

std::vector<double> PiecewisePolynomial::breakpoints() const
{
    std::vector<double> out;
    out.reserve(2 * pieces_.size());
    for (auto const& p : pieces_) {
        out.push_back(p.lo);
        out.push_back(p.hi);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double PiecewisePolynomial::support_lo() const
{
    return pieces_.empty() ? 0.0 : pieces_.front().lo;
}

double PiecewisePolynomial::support_hi() const
{
    return pieces_.empty() ? 0.0 : pieces_.back().hi;
}

PiecewisePolynomial PiecewisePolynomial::reflected() const
{
    std::vector<PolynomialPiece> out;
    out.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        PolynomialPiece q{-it->hi, -it->lo, it->coeffs};
        for (std::size_t j = 1; j < q.coeffs.size(); j += 2) {
            q.coeffs[j] = -q.coeffs[j];
        }
        out.push_back(std::move(q));
    }
    return PiecewisePolynomial(std::move(out));
}

PiecewisePolynomial PiecewisePolynomial::scaled(double c) const
{
    auto out = pieces_;
    for (auto& p : out) {
        for (auto& v : p.coeffs) {
            v *= c;
        }
    }
    return PiecewisePolynomial(std::move(out));
}

ShapePotential::ShapePotential(std::string label, std::vector<PolynomialPiece> pieces)
    : label_(std::move(label)), fn_(std::move(pieces))
{
    for (auto const& p : fn_.pieces()) {
        if (p.lo < -1.0 || p.hi > 1.0) {
            throw ValidationError(fmt::format(
                "shape '{}': piece [{}, {}] leaves the interval [-1, 1]", label_, p.lo, p.hi));
        }
    }
}

ShapePotential ShapePotential::constant(double value, double lo, double hi, std::string label)
{
    return ShapePotential(std::move(label), {PolynomialPiece{lo, hi, {value}}});
}

ShapePotential ShapePotential::polynomial(std::vector<double> coeffs, double lo, double hi,
                                          std::string label)
{
    return ShapePotential(std::move(label), {PolynomialPiece{lo, hi, std::move(coeffs)}});
}

ShapePotential ShapePotential::reflected() const
{
    auto r = fn_.reflected();
    std::vector<PolynomialPiece> pieces(r.pieces().begin(), r.pieces().end());
    return ShapePotential(label_.empty() ? label_ : label_ + " (reflected)", std::move(pieces));
}

std::string_view to_string(MomentClass c)
{
    switch (c) {
    case MomentClass::DeltaPrimeDeltaLimit:
        return "DeltaPrimeDeltaLimit";
    case MomentClass::DivergentInDistributions:
        return "DivergentInDistributions";
    case MomentClass::OtherWeakLimit:
        return "OtherWeakLimit";
    }
    return "OtherWeakLimit";
}

MomentReport moments(const ShapePotential& phi, const ShapePotential& psi, double tol)
{
    if (!(tol > 0.0)) {
        throw ValidationError("moments: tol must be positive");
    }
    MomentReport r;
    r.m0_phi = phi.function().moment(0);
    r.m1_phi = phi.function().moment(1);
    r.m0_psi = psi.function().moment(0);
    if (std::abs(r.m0_phi) > tol) {
        r.classification = MomentClass::DivergentInDistributions;
    } else if (std::abs(r.m1_phi + 1.0) <= tol && std::abs(r.m0_psi - 1.0) <= tol) {
        r.classification = MomentClass::DeltaPrimeDeltaLimit;
    } else {
        r.classification = MomentClass::OtherWeakLimit;
    }
    return r;
}

namespace {

void require_positive_eps(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ValidationError(fmt::format("eps must be positive and finite, got {}", eps));
    }
}

} // namespace

double squeezed_value(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                      double beta, double eps, double x)
{
    require_positive_eps(eps);
    if (std::abs(x) > eps) {
        return 0.0;
    }
    double s = x / eps;
    return alpha / (eps * eps) * phi(s) + beta / eps * psi(s);
}

double squeezed_integral(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                         double beta, double eps, double a, double b)
{
    require_positive_eps(eps);
    double sa = a / eps;
    double sb = b / eps;
    // dx = eps ds
    return alpha / eps * phi.function().integral(sa, sb) + beta * psi.function().integral(sa, sb);
}

} // namespace dplab
