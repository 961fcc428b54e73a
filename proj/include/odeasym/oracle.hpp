// Ground truth by direct integration: adaptive Dormand-Prince 5(4) on the
// normalized column equations, plus empirical measurement of the remainder
// decay of the truncated expansion along a lambda ray.
#ifndef ODEASYM_ORACLE_HPP
#define ODEASYM_ORACLE_HPP

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "odeasym/expansion.hpp"
#include "odeasym/neumann.hpp"
#include "odeasym/problem.hpp"

namespace odeasym {

// Thrown when the required step size underflows (stiffness / resolution).
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& what, double x, double step)
        : std::runtime_error(what), x_(x), step_(step) {}
    double where() const { return x_; }
    double step() const { return step_; }

private:
    double x_, step_;
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    double min_step = std::numeric_limits<double>::infinity();
    double tol = 0.0;
};

using State2 = std::array<Complex, 2>;

// One adaptive pass from x0 to x1 (either direction); y is updated in place.
void rk45_integrate(const std::function<State2(double, const State2&)>& rhs, double x0, double x1,
                    State2& y, double rtol, double atol, IntegratorStats& stats);

// Column k of Z with the boundary normalization z_kk fixed at its anchor
// (column 1: z11(1) = 1, z21(0) = 0; column 2: z22(0) = 1, z12(1) = 0).
// Each column is integrated in the direction that keeps its oscillatory
// factor decaying; requires Re(lambda) >= 0 (mirror the problem otherwise).
ColumnFunction integrate_direct(const SystemCoefficients& coeffs, const DerivedQuantities& d,
                                Complex lambda, int column, double tol,
                                IntegratorStats* stats = nullptr);

struct OracleSolution {
    ColumnFunction z1, z2;
    Complex lambda;
    IntegratorStats stats1, stats2;

    Mat2 at(int node) const {
        Mat2 m;
        m(0, 0) = z1.c1.values()[static_cast<size_t>(node)];
        m(1, 0) = z1.c2.values()[static_cast<size_t>(node)];
        m(0, 1) = z2.c1.values()[static_cast<size_t>(node)];
        m(1, 1) = z2.c2.values()[static_cast<size_t>(node)];
        return m;
    }
    // max_x |det Z(x) - 1| over the grid.
    double max_det_deviation() const;
};

OracleSolution solve_normalized(const SystemCoefficients& coeffs, const DerivedQuantities& d,
                                Complex lambda, double tol);

struct RateReport {
    std::vector<Complex> lambdas;
    std::vector<double> errors;         // sup_x entrywise |Z_hat - (I + sum R^m lambda^-m)|
    std::vector<double> scaled_errors;  // errors * |lambda|^n
    double slope = 0.0;                 // least-squares log-log slope
    double slope_target = 0.0;          // -(n+1) + 0.3
    bool floor_limited = false;         // all errors at rounding floor
    int order = 0;

    bool slope_ok() const { return floor_limited || slope <= slope_target; }
};

// Errors of the de-oscillated oracle columns against the truncated expansion
// over an increasing-|lambda| ray; the table may have order 0 (formal part I).
RateReport measure_remainder(const ExpansionTable& table, const DerivedQuantities& d,
                             const SystemCoefficients& coeffs, const std::vector<Complex>& ray,
                             int n, double tol = 1e-12);

}  // namespace odeasym

#endif
