#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dplab {

/// Largest polynomial degree accepted on a single piece.
inline constexpr int kMaxPieceDegree = 8;

/// Default tolerance used to classify moment conditions.
inline constexpr double kDefaultMomentTol = 1e-10;

/// Evaluate sum_j coeffs[j] * x^j by Horner's rule.
double polyval(std::span<const double> coeffs, double x);

/// Exact integral of sum_j coeffs[j] * x^j over [a, b].
double polyint(std::span<const double> coeffs, double a, double b);

/// A polynomial in the global coordinate, living on the closed interval [lo, hi].
struct PolynomialPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> coeffs; ///< ascending degree

    double operator()(double x) const { return polyval(coeffs, x); }
    /// Degree after dropping trailing zero coefficients; -1 for the zero polynomial.
    int degree() const;
};

/// A compactly supported, bounded piecewise-polynomial function on the real line.
///
/// Pieces are closed intervals sorted by left end with disjoint interiors.
/// Gaps between pieces and everything outside the pieces evaluate to 0. Where
/// two pieces share an endpoint the right piece wins, so evaluation is
/// right-continuous at interior breakpoints.
class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default;
    /// Throws ValidationError on overlapping, unordered, empty or non-finite pieces,
    /// or on a degree above kMaxPieceDegree.
    explicit PiecewisePolynomial(std::vector<PolynomialPiece> pieces);

    double operator()(double x) const;

    /// Exact integral over [a, b] (a > b gives the negated value).
    double integral(double a, double b) const;
    /// Exact moment  int x^order f(x) dx  over the whole line.
    double moment(int order) const;

    std::span<const PolynomialPiece> pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    /// True when every coefficient of every piece is zero.
    bool is_zero() const;
    /// True when every piece has degree <= 0.
    bool is_piecewise_constant() const;
    /// Sorted, de-duplicated piece endpoints.
    std::vector<double> breakpoints() const;
    double support_lo() const;
    double support_hi() const;

    /// x -> f(-x).
    PiecewisePolynomial reflected() const;
    /// x -> c * f(x).
    PiecewisePolynomial scaled(double c) const;

private:
    std::vector<PolynomialPiece> pieces_;
};

/// A shape potential of class P: piecewise polynomial supported in [-1, 1].
class ShapePotential {
public:
    ShapePotential() = default;
    /// Throws ValidationError if any piece leaves [-1, 1].
    ShapePotential(std::string label, std::vector<PolynomialPiece> pieces);

    /// Constant `value` on [lo, hi].
    static ShapePotential constant(double value, double lo = -1.0, double hi = 1.0,
                                   std::string label = {});
    /// The polynomial `coeffs` on [lo, hi].
    static ShapePotential polynomial(std::vector<double> coeffs, double lo = -1.0,
                                     double hi = 1.0, std::string label = {});
    static ShapePotential zero(std::string label = "zero") { return {std::move(label), {}}; }

    double operator()(double s) const { return fn_(s); }
    const std::string& label() const { return label_; }
    const PiecewisePolynomial& function() const { return fn_; }
    std::span<const PolynomialPiece> pieces() const { return fn_.pieces(); }
    bool is_zero() const { return fn_.is_zero(); }
    bool is_piecewise_constant() const { return fn_.is_piecewise_constant(); }

    /// s -> Phi(-s); used for incidence from the right.
    ShapePotential reflected() const;

private:
    std::string label_;
    PiecewisePolynomial fn_;
};

enum class MomentClass {
    DeltaPrimeDeltaLimit,     ///< potentials converge to alpha*delta' + beta*delta
    DivergentInDistributions, ///< Phi has nonzero mean
    OtherWeakLimit,
};

std::string_view to_string(MomentClass c);

struct MomentReport {
    double m0_phi = 0.0; ///< int Phi
    double m1_phi = 0.0; ///< int s Phi
    double m0_psi = 0.0; ///< int Psi
    MomentClass classification = MomentClass::OtherWeakLimit;
};

/// Exact moments of (Phi, Psi) and the distributional-limit class. Requires tol > 0.
MomentReport moments(const ShapePotential& phi, const ShapePotential& psi,
                     double tol = kDefaultMomentTol);

/// V_eps(x) = alpha eps^-2 Phi(x/eps) + beta eps^-1 Psi(x/eps). Requires eps > 0.
double squeezed_value(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                      double beta, double eps, double x);

/// Exact integral of V_eps over [a, b].
double squeezed_integral(const ShapePotential& phi, const ShapePotential& psi, double alpha,
                         double beta, double eps, double a, double b);

} // namespace dplab
