// Constructive side of the asymptotics: the Volterra operators V1/V2 and their
// truncated Neumann series, the oscillatory remainder integrals v_ij with the
// Upsilon estimates, and the de-oscillation step that aligns Neumann solutions
// with the formal expansion.
#ifndef ODEASYM_NEUMANN_HPP
#define ODEASYM_NEUMANN_HPP

#include <array>
#include <optional>

#include "odeasym/expansion.hpp"
#include "odeasym/problem.hpp"

namespace odeasym {

// Thrown by neumann_solve when lambda is too small for the contraction bound.
class ContractionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by deoscillate when the endpoint system is near-singular.
class ConditioningError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A column of Z(x,lambda). The stored components are mantissas of
// value_i(x) = c_i(x) * exp(osc_sigma*lambda*rho(x) + log_offset);
// osc_sigma in {-1,0,+1} tags the attached oscillatory factor.
struct ColumnFunction {
    GridFunction c1, c2;
    int osc_sigma = 0;
    Complex log_offset = Complex(0.0);

    double mantissa_sup() const { return std::max(c1.max_abs(), c2.max_abs()); }
    // Channel multiplied out at grid node j.
    std::array<Complex, 2> value_at(const DerivedQuantities& d, Complex lambda, int j) const;
};

ColumnFunction unit_column(const std::shared_ptr<const ChebGrid>& grid, int k);

struct RemainderEstimates {
    double upsilon = 0.0;                   // max_{i,j,s,x} |v_ij(s,x,lambda)|
    std::optional<double> upsilon_hat;      // same for the integrated-by-parts v-hat
    double c_q_int = 0.0;                   // int_0^1 |q12| + |q21|
    double c_q = 0.0;                       // 4 e^{2 kappa rho(1)} (max|q12/a| + max|q21/a|)
    double kappa = 0.0;
    Complex lambda;

    bool contraction() const { return c_q_int * upsilon < 0.5; }
    // Neumann series norm constant 2(1 + e^{2 kappa rho(1)} C_q^int).
    double c_v(double rho1) const { return 2.0 * (1.0 + std::exp(2.0 * kappa * rho1) * c_q_int); }
};

// The four remainder integrals; i,j index the kernel/limit convention
// (11, 12 integrate q12 toward x=1; 21, 22 integrate q21 from x=0).
Complex v_integral(const DerivedQuantities& d, int i, int j, double s, double x, Complex lambda);

struct IbpParts {
    Complex boundary;  // lambda^{-1}-scaled endpoint term
    Complex hat;       // v-hat; boundary + hat/lambda reproduces v_integral
};

// Integration-by-parts split; requires one derivative of q12/a and q21/a.
IbpParts v_integral_ibp(const DerivedQuantities& d, int i, int j, double s, double x,
                        Complex lambda);

// Upsilon quantities by maximizing |v_ij| over an (s,x) scan grid.
RemainderEstimates estimate_remainders(const DerivedQuantities& d, Complex lambda, double kappa,
                                       int sx_density = 33);

// Exact integral action of V_k(lambda); supports the oscillation channels that
// arise in the Neumann iteration and the intertwining identities
// (V1 with sigma in {0,-1}, V2 with sigma in {0,+1}).
ColumnFunction apply_V(const DerivedQuantities& d, int k, Complex lambda,
                       const ColumnFunction& col);

// Empirical lower bound on the sup-norm operator norm of V_k (or V_k^2) from a
// family of unit-sup probes.
double operator_norm_probe(const DerivedQuantities& d, int k, Complex lambda, bool squared);

// Truncated Neumann series z0 + V z0 + ... + V^{2n+1} z0 for column k.
// Requires the contraction condition C_q^int * Upsilon(lambda) < 1/2.
ColumnFunction neumann_solve(const DerivedQuantities& d, int k, Complex lambda, int n);

struct Deoscillated {
    ColumnFunction zhat1, zhat2;
    Complex C1, C2;
};

// Removes the oscillatory admixture of the opposite column so the result
// matches the formal expansion columns; the constants come from matching the
// second component at x=0 (column 1) and the first at x=1 (column 2).
Deoscillated deoscillate(const DerivedQuantities& d, const ExpansionTable& table,
                         const ColumnFunction& z1, const ColumnFunction& z2, Complex lambda);

// Smallest modulus along the ray arg(lambda)=arg for which the measured
// contraction C_q^int * Upsilon < 1/2 holds (doubling scan).
double suggest_lambda0(const DerivedQuantities& d, double kappa, double arg = 0.0);

}  // namespace odeasym

#endif
