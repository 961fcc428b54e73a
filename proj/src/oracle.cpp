#include "odeasym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace odeasym {

namespace {

// Dormand-Prince 5(4) pair.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,   0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

State2 axpy(const State2& y, double h, const State2& k, double c) {
    return {y[0] + h * c * k[0], y[1] + h * c * k[1]};
}

}  // namespace

void rk45_integrate(const std::function<State2(double, const State2&)>& rhs, double x0, double x1,
                    State2& y, double rtol, double atol, IntegratorStats& stats) {
    if (x0 == x1) return;
    const double dir = (x1 > x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double x = x0;
    double h = dir * std::min(span, 1e-2);
    State2 k[7];
    k[0] = rhs(x, y);
    stats.tol = rtol;

    while (dir * (x1 - x) > 0.0) {
        if (std::abs(h) > std::abs(x1 - x)) h = x1 - x;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
            throw StiffnessError("rk45: step size underflow (system too stiff for the tolerance)",
                                 x, std::abs(h));

        for (int i = 1; i < 7; ++i) {
            State2 yi = y;
            for (int j = 0; j < i; ++j) yi = axpy(yi, h, k[j], kA[i][j]);
            k[i] = rhs(x + kC[i] * h, yi);
        }
        // stage 7 sits at the 5th-order solution (b7 = 0, first-same-as-last)
        State2 y5 = y;
        for (int j = 0; j < 6; ++j) y5 = axpy(y5, h, k[j], kA[6][j]);

        double err = 0.0;
        for (int c = 0; c < 2; ++c) {
            Complex e(0.0);
            for (int j = 0; j < 7; ++j) e += kE[j] * k[j][c];
            e *= h;
            const double scale = atol + rtol * std::max(std::abs(y[c]), std::abs(y5[c]));
            err = std::max(err, std::abs(e) / scale);
        }

        if (err <= 1.0) {
            x += h;
            y = y5;
            k[0] = k[6];
            ++stats.steps;
            stats.min_step = std::min(stats.min_step, std::abs(h));
        } else {
            ++stats.rejected;  // k[0] still matches (x, y)
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
        h *= factor;
    }
}

ColumnFunction integrate_direct(const SystemCoefficients& coeffs, const DerivedQuantities& d,
                                Complex lambda, int column, double tol, IntegratorStats* stats) {
    if (column != 1 && column != 2)
        throw std::invalid_argument("integrate_direct: column must be 1 or 2");
    if (lambda.real() < 0.0)
        throw std::invalid_argument(
            "integrate_direct: requires Re(lambda) >= 0; mirror the problem for the left half-plane");
    (void)coeffs;

    const auto& grid = d.rho.grid();
    const int P = grid->size();
    IntegratorStats st;
    st.tol = tol;

    std::vector<Complex> v1(static_cast<size_t>(P)), v2(static_cast<size_t>(P));

    if (column == 1) {
        // z11' = q12 z21 ; z21' = -lambda a z21 + q21 z11, forward from x=0.
        auto rhs = [&](double x, const State2& y) -> State2 {
            const Complex q12 = d.q12.evaluate(x);
            const Complex q21 = d.q21.evaluate(x);
            const Complex a = d.a.evaluate(x);
            return {q12 * y[1], -lambda * a * y[1] + q21 * y[0]};
        };
        State2 y{Complex(1.0), Complex(0.0)};
        v1[0] = y[0];
        v2[0] = y[1];
        for (int j = 0; j + 1 < P; ++j) {
            rk45_integrate(rhs, grid->node(j), grid->node(j + 1), y, tol, tol * 1e-2, st);
            v1[static_cast<size_t>(j + 1)] = y[0];
            v2[static_cast<size_t>(j + 1)] = y[1];
        }
        const Complex norm = v1.back();
        if (std::abs(norm) == 0.0)
            throw StiffnessError("integrate_direct: column 1 lost all mass", 1.0, 0.0);
        for (auto& z : v1) z /= norm;
        for (auto& z : v2) z /= norm;
    } else {
        // z12' = lambda a z12 + q12 z22 ; z22' = q21 z12, backward from x=1.
        auto rhs = [&](double x, const State2& y) -> State2 {
            const Complex q12 = d.q12.evaluate(x);
            const Complex q21 = d.q21.evaluate(x);
            const Complex a = d.a.evaluate(x);
            return {lambda * a * y[0] + q12 * y[1], q21 * y[0]};
        };
        State2 y{Complex(0.0), Complex(1.0)};
        v1[static_cast<size_t>(P - 1)] = y[0];
        v2[static_cast<size_t>(P - 1)] = y[1];
        for (int j = P - 1; j > 0; --j) {
            rk45_integrate(rhs, grid->node(j), grid->node(j - 1), y, tol, tol * 1e-2, st);
            v1[static_cast<size_t>(j - 1)] = y[0];
            v2[static_cast<size_t>(j - 1)] = y[1];
        }
        const Complex norm = v2.front();
        if (std::abs(norm) == 0.0)
            throw StiffnessError("integrate_direct: column 2 lost all mass", 0.0, 0.0);
        for (auto& z : v1) z /= norm;
        for (auto& z : v2) z /= norm;
    }

    ColumnFunction out;
    out.c1 = GridFunction(grid, std::move(v1), 0);
    out.c2 = GridFunction(grid, std::move(v2), 0);
    if (stats) *stats = st;
    return out;
}

double OracleSolution::max_det_deviation() const {
    double m = 0.0;
    const size_t P = z1.c1.values().size();
    for (size_t j = 0; j < P; ++j) {
        const Complex det = z1.c1.values()[j] * z2.c2.values()[j] -
                            z2.c1.values()[j] * z1.c2.values()[j];
        m = std::max(m, std::abs(det - 1.0));
    }
    return m;
}

OracleSolution solve_normalized(const SystemCoefficients& coeffs, const DerivedQuantities& d,
                                Complex lambda, double tol) {
    OracleSolution sol;
    sol.lambda = lambda;
    sol.z1 = integrate_direct(coeffs, d, lambda, 1, tol, &sol.stats1);
    sol.z2 = integrate_direct(coeffs, d, lambda, 2, tol, &sol.stats2);
    return sol;
}

RateReport measure_remainder(const ExpansionTable& table, const DerivedQuantities& d,
                             const SystemCoefficients& coeffs, const std::vector<Complex>& ray,
                             int n, double tol) {
    if (ray.size() < 2) throw std::invalid_argument("measure_remainder: need at least 2 samples");
    for (size_t i = 1; i < ray.size(); ++i)
        if (std::abs(ray[i]) <= std::abs(ray[i - 1]))
            throw std::invalid_argument("measure_remainder: |lambda| must be increasing");

    RateReport report;
    report.order = n;
    report.slope_target = -(n + 1) + 0.3;
    const auto& grid = d.rho.grid();
    const int P = grid->size();

    for (const Complex lambda : ray) {
        const OracleSolution sol = solve_normalized(coeffs, d, lambda, tol);
        const Deoscillated deo = deoscillate(d, table, sol.z1, sol.z2, lambda);

        double err = 0.0;
        for (int j = 0; j < P; ++j) {
            Mat2 formal = Mat2::identity();
            Complex invpow(1.0);
            for (const auto& term : table.terms()) {
                invpow /= lambda;
                formal(0, 0) += invpow * term.r11.values()[static_cast<size_t>(j)];
                formal(0, 1) += invpow * term.r12.values()[static_cast<size_t>(j)];
                formal(1, 0) += invpow * term.r21.values()[static_cast<size_t>(j)];
                formal(1, 1) += invpow * term.r22.values()[static_cast<size_t>(j)];
            }
            err = std::max(err, std::abs(deo.zhat1.c1.values()[static_cast<size_t>(j)] - formal(0, 0)));
            err = std::max(err, std::abs(deo.zhat1.c2.values()[static_cast<size_t>(j)] - formal(1, 0)));
            err = std::max(err, std::abs(deo.zhat2.c1.values()[static_cast<size_t>(j)] - formal(0, 1)));
            err = std::max(err, std::abs(deo.zhat2.c2.values()[static_cast<size_t>(j)] - formal(1, 1)));
        }
        report.lambdas.push_back(lambda);
        report.errors.push_back(err);
        report.scaled_errors.push_back(err * std::pow(std::abs(lambda), n));
    }

    report.floor_limited =
        *std::max_element(report.errors.begin(), report.errors.end()) < 1e-12;

    // least-squares slope of log err vs log |lambda|
    const size_t m = report.errors.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double lx = std::log(std::abs(report.lambdas[i]));
        const double ly = std::log(std::max(report.errors[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = m * sxx - sx * sx;
    report.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    return report;
}

}  // namespace odeasym
