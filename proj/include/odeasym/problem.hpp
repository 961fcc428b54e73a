// System coefficients for Y' = (lambda*A + B)Y with sign-split diagonal A,
// their validation, and the gauge quantities driving every later module.
#ifndef ODEASYM_PROBLEM_HPP
#define ODEASYM_PROBLEM_HPP

#include <string>
#include <vector>

#include "odeasym/grid_function.hpp"
#include "odeasym/scaled.hpp"

namespace odeasym {

struct SystemCoefficients {
    GridFunction a1, a2;                // diagonal of A: a1 > 0 > a2
    GridFunction b11, b12, b21, b22;    // entries of B (may be complex)
    int order = 1;                      // expansion order n >= 0
    double epsilon = 0.0;               // separation margin: a1 - a2 >= epsilon
};

struct ValidationIssue {
    enum class Kind { SignViolation, SeparationViolation, SmoothnessShortfall, GridMismatch };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

ValidationReport validate(const SystemCoefficients& coeffs);

// Throws std::invalid_argument carrying the report summary when invalid.
void require_valid(const SystemCoefficients& coeffs);

// Gauge-transformed quantities; immutable after construction.
struct DerivedQuantities {
    GridFunction a;          // a1 - a2 (>= epsilon)
    GridFunction b;          // exp(int_0^x (b11 - b22))
    GridFunction A1, A2;     // antiderivatives of a1, a2 from 0
    GridFunction rho;        // A1 - A2, strictly increasing, rho(0) = 0
    GridFunction q12, q21;   // b12/b and b21*b
    GridFunction int_b11, int_b22;  // antiderivatives backing M(x)

    double rho1() const { return rho.values().back().real(); }
};

DerivedQuantities derive(const SystemCoefficients& coeffs);

struct HalfPlane {
    enum class Side { plus, minus };
    Side side = Side::plus;
    double kappa = 0.0;

    // plus: Re(lambda) > -kappa; minus: Re(lambda) < kappa.
    bool contains(Complex lambda) const {
        return side == Side::plus ? lambda.real() > -kappa : lambda.real() < kappa;
    }
};

// Diagonal factor carrying the diagonal part of B.
Mat2 matrix_M(const DerivedQuantities& d, double x);

// Exponents (lambda*A1(x), lambda*A2(x)) of the diagonal oscillatory factor;
// callers combine them in exponent-shifted form.
struct DiagExponents {
    Complex e1, e2;
    ScaledComplex entry(int k) const { return ScaledComplex::from_exponent(k == 0 ? e1 : e2); }
};

DiagExponents matrix_E(const DerivedQuantities& d, double x, Complex lambda);

// Swap-conjugated system: S Y S solves it at -lambda, mapping the left
// half-plane onto the right one. Coefficients: (-a2, -a1; b22, b21, b12, b11).
SystemCoefficients mirrored(const SystemCoefficients& coeffs);

}  // namespace odeasym

#endif
