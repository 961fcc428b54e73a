#include "odeasym/neumann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace odeasym {

namespace {

// phi-functions of the exponential product rule on one cell:
//   int_0^1 e^{z(u-1)} du                -> phi_a
//   int_0^1 u e^{z(u-1)} du              -> phi_b
//   int_0^1 e^{z u} du                   -> phi_c
//   int_0^1 u e^{z u} du                 -> phi_d
// Series below |z| = 0.5 avoids the cancellation in the closed forms.
Complex phi_a(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex term(1.0), sum(0.0);
        for (int k = 0; k < 16; ++k) {
            sum += term / static_cast<double>(k + 1);
            term *= -z / static_cast<double>(k + 1);
        }
        return sum;
    }
    return (1.0 - std::exp(-z)) / z;
}
Complex phi_b(Complex z) {
    if (std::abs(z) < 0.5) {
        // sum_k (-z)^k / (k+2)!
        Complex t(1.0), sum(0.0);
        double f = 2.0;
        for (int k = 0; k < 16; ++k) {
            sum += t / f;
            t *= -z;
            f *= static_cast<double>(k + 3);
        }
        return sum;
    }
    return (z - 1.0 + std::exp(-z)) / (z * z);
}
Complex phi_c(Complex z) { return phi_a(-z); }
Complex phi_d(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex t(1.0), sum(0.0);
        double f = 2.0;  // (k+2)!
        for (int k = 0; k < 16; ++k) {
            sum += t * static_cast<double>(k + 1) / f;
            t *= z;
            f *= static_cast<double>(k + 3);
        }
        return sum;
    }
    return ((z - 1.0) * std::exp(z) + 1.0) / (z * z);
}

void guard_exponent(double re) {
    if (re > 700.0)
        throw std::invalid_argument(
            "oscillatory kernel grows unboundedly: lambda is outside the supported half-plane");
}

// int_{lo}^{hi} w(t) exp(mu*(rho(t)-rho_ref)) dt, composite exponential product
// rule over the grid cells; Re(mu*(rho-rho_ref)) must stay bounded above.
Complex osc_integral(const GridFunction& w, const GridFunction& rho, double lo, double hi,
                     Complex mu, double rho_ref) {
    if (!(hi > lo)) return Complex(0.0);
    const auto& xs = w.grid()->nodes();
    const auto& wv = w.values();
    const auto& rv = rho.values();

    Complex acc(0.0);
    double p0 = lo;
    Complex w0 = w.evaluate(lo);
    double r0 = rho.evaluate(lo).real();
    size_t j = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), lo) - xs.begin());
    while (p0 < hi) {
        double p1;
        Complex w1;
        double r1;
        if (j < xs.size() && xs[j] < hi) {
            p1 = xs[j];
            w1 = wv[j];
            r1 = rv[j].real();
            ++j;
        } else {
            p1 = hi;
            w1 = w.evaluate(hi);
            r1 = rho.evaluate(hi).real();
        }
        const double h = p1 - p0;
        if (h > 0.0) {
            const Complex z = mu * (r1 - r0);
            const Complex local = h * (w0 * phi_a(z) + (w1 - w0) * phi_b(z));
            const Complex shift = mu * (r1 - rho_ref);
            guard_exponent(shift.real());
            acc += local * std::exp(shift);
        }
        p0 = p1;
        w0 = w1;
        r0 = r1;
    }
    return acc;
}

// F(x_j) = int_0^{x_j} w exp(mu*(rho(t)-rho(x_j))) dt for every node.
std::vector<Complex> osc_cumint_forward(const GridFunction& w, const GridFunction& rho,
                                        Complex mu) {
    const auto& xs = w.grid()->nodes();
    const auto& wv = w.values();
    const auto& rv = rho.values();
    std::vector<Complex> out(xs.size(), Complex(0.0));
    for (size_t j = 0; j + 1 < xs.size(); ++j) {
        const double h = xs[j + 1] - xs[j];
        const Complex z = mu * (rv[j + 1].real() - rv[j].real());
        guard_exponent((-z).real());
        out[j + 1] = out[j] * std::exp(-z) + h * (wv[j] * phi_a(z) + (wv[j + 1] - wv[j]) * phi_b(z));
    }
    return out;
}

// B(x_j) = int_{x_j}^1 w exp(mu*(rho(t)-rho(x_j))) dt for every node.
std::vector<Complex> osc_cumint_backward(const GridFunction& w, const GridFunction& rho,
                                         Complex mu) {
    const auto& xs = w.grid()->nodes();
    const auto& wv = w.values();
    const auto& rv = rho.values();
    std::vector<Complex> out(xs.size(), Complex(0.0));
    for (size_t j = xs.size() - 1; j-- > 0;) {
        const double h = xs[j + 1] - xs[j];
        const Complex z = mu * (rv[j + 1].real() - rv[j].real());
        guard_exponent(z.real());
        out[j] = out[j + 1] * std::exp(z) + h * (wv[j] * phi_c(z) + (wv[j + 1] - wv[j]) * phi_d(z));
    }
    return out;
}

GridFunction from_values(const std::shared_ptr<const ChebGrid>& grid, std::vector<Complex> v) {
    return GridFunction(grid, std::move(v), 0);
}

Complex signum(Complex z) { return std::abs(z) == 0.0 ? Complex(1.0) : std::conj(z) / std::abs(z); }

}  // namespace

std::array<Complex, 2> ColumnFunction::value_at(const DerivedQuantities& d, Complex lambda,
                                                int j) const {
    const Complex phase = std::exp(static_cast<double>(osc_sigma) * lambda *
                                       d.rho.values()[static_cast<size_t>(j)] +
                                   log_offset);
    return {c1.values()[static_cast<size_t>(j)] * phase,
            c2.values()[static_cast<size_t>(j)] * phase};
}

ColumnFunction unit_column(const std::shared_ptr<const ChebGrid>& grid, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("unit_column: k must be 1 or 2");
    ColumnFunction z;
    z.c1 = GridFunction::constant(grid, k == 1 ? 1.0 : 0.0);
    z.c2 = GridFunction::constant(grid, k == 2 ? 1.0 : 0.0);
    return z;
}

Complex v_integral(const DerivedQuantities& d, int i, int j, double s, double x, Complex lambda) {
    if (s < 0.0 || s > 1.0 || x < 0.0 || x > 1.0)
        throw std::domain_error("v_integral: s and x must lie in [0,1]");
    const double rs = d.rho.evaluate(s).real();
    const double rx = d.rho.evaluate(x).real();
    if (i == 1) {
        const double lo = std::max(x, s);
        if (j == 1) return -osc_integral(d.q12, d.rho, lo, 1.0, -lambda, rs);
        if (j == 2) return -osc_integral(d.q12, d.rho, lo, 1.0, -lambda, rx);
    } else if (i == 2) {
        const double hi = std::min(x, s);
        if (j == 1) return -osc_integral(d.q21, d.rho, 0.0, hi, lambda, rx);
        if (j == 2) return -osc_integral(d.q21, d.rho, 0.0, hi, lambda, rs);
    }
    throw std::invalid_argument("v_integral: indices must be in {1,2}");
}

IbpParts v_integral_ibp(const DerivedQuantities& d, int i, int j, double s, double x,
                        Complex lambda) {
    if (s < 0.0 || s > 1.0 || x < 0.0 || x > 1.0)
        throw std::domain_error("v_integral_ibp: s and x must lie in [0,1]");
    const GridFunction qa = (i == 1 ? d.q12 : d.q21) / d.a;
    GridFunction dqa;
    try {
        dqa = qa.derivative();
    } catch (const SmoothnessError&) {
        throw SmoothnessError("v_integral_ibp: q/a is not differentiable (smoothness hint 0)");
    }
    const double rs = d.rho.evaluate(s).real();
    const double rx = d.rho.evaluate(x).real();

    auto kernel = [&](double t, double rref) {
        // exp(-lambda (rho(t)-rho(ref))) for i=1 rows, exp(+...) sign folded by caller
        return std::exp(-lambda * (d.rho.evaluate(t).real() - rref));
    };

    IbpParts out;
    if (i == 1) {
        const double lo = std::max(x, s);
        const double rref = (j == 1) ? rs : rx;
        // boundary: lambda^{-1} [ (q12/a)(t) e^{-lambda(rho(t)-rho_ref)} ]_{t=lo}^{t=1}
        out.boundary = (qa.evaluate(1.0) * kernel(1.0, rref) - qa.evaluate(lo) * kernel(lo, rref)) /
                       lambda;
        out.hat = -osc_integral(dqa, d.rho, lo, 1.0, -lambda, rref);
    } else if (i == 2) {
        const double hi = std::min(x, s);
        const double rref = (j == 1) ? rx : rs;
        auto kplus = [&](double t) { return std::exp(lambda * (d.rho.evaluate(t).real() - rref)); };
        out.boundary = -(qa.evaluate(hi) * kplus(hi) - qa.evaluate(0.0) * kplus(0.0)) / lambda;
        out.hat = osc_integral(dqa, d.rho, 0.0, hi, lambda, rref);
    } else {
        throw std::invalid_argument("v_integral_ibp: indices must be in {1,2}");
    }
    return out;
}

RemainderEstimates estimate_remainders(const DerivedQuantities& d, Complex lambda, double kappa,
                                       int sx_density) {
    if (sx_density < 2) throw std::invalid_argument("estimate_remainders: density must be >= 2");
    RemainderEstimates est;
    est.lambda = lambda;
    est.kappa = kappa;
    est.c_q_int = (d.q12.abs() + d.q21.abs()).definite_integral().real();
    est.c_q = 4.0 * std::exp(2.0 * kappa * d.rho1()) *
              ((d.q12 / d.a).max_abs() + (d.q21 / d.a).max_abs());

    const bool has_hat = d.q12.smoothness_hint() >= 1 && d.q21.smoothness_hint() >= 1 &&
                         d.a.smoothness_hint() >= 1;
    GridFunction dq12a, dq21a;
    if (has_hat) {
        dq12a = (d.q12 / d.a).derivative();
        dq21a = (d.q21 / d.a).derivative();
    }
    double up = 0.0, uph = 0.0;
    for (int is = 0; is < sx_density; ++is) {
        const double s = static_cast<double>(is) / (sx_density - 1);
        const double rs = d.rho.evaluate(s).real();
        for (int ix = 0; ix < sx_density; ++ix) {
            const double x = static_cast<double>(ix) / (sx_density - 1);
            const double rx = d.rho.evaluate(x).real();
            const double lo = std::max(x, s);
            const double hi = std::min(x, s);
            for (int j = 1; j <= 2; ++j) {
                const double rref_up = (j == 1) ? rs : rx;   // rows integrating q12
                const double rref_lo = (j == 1) ? rx : rs;   // rows integrating q21
                up = std::max(up, std::abs(osc_integral(d.q12, d.rho, lo, 1.0, -lambda, rref_up)));
                up = std::max(up, std::abs(osc_integral(d.q21, d.rho, 0.0, hi, lambda, rref_lo)));
                if (has_hat) {
                    uph = std::max(uph,
                                   std::abs(osc_integral(dq12a, d.rho, lo, 1.0, -lambda, rref_up)));
                    uph = std::max(uph,
                                   std::abs(osc_integral(dq21a, d.rho, 0.0, hi, lambda, rref_lo)));
                }
            }
        }
    }
    est.upsilon = up;
    if (has_hat) est.upsilon_hat = uph;
    return est;
}

ColumnFunction apply_V(const DerivedQuantities& d, int k, Complex lambda,
                       const ColumnFunction& col) {
    const auto& grid = common_grid(col.c1, col.c2);
    const GridFunction w1 = d.q21 * col.c1;  // feeds the second output component
    const GridFunction w2 = d.q12 * col.c2;  // feeds the first output component

    ColumnFunction out;
    out.osc_sigma = col.osc_sigma;
    out.log_offset = col.log_offset;

    if (k == 1) {
        if (col.osc_sigma == 0) {
            out.c1 = -(w2.integrate_from(1));
            out.c2 = from_values(grid, osc_cumint_forward(w1, d.rho, lambda));
        } else if (col.osc_sigma == -1) {
            out.c1 = -from_values(grid, osc_cumint_backward(w2, d.rho, -lambda));
            out.c2 = w1.integrate_from(0);
        } else {
            throw std::invalid_argument("apply_V: V1 supports oscillation channels 0 and -1");
        }
    } else if (k == 2) {
        if (col.osc_sigma == 0) {
            out.c1 = -from_values(grid, osc_cumint_backward(w2, d.rho, -lambda));
            out.c2 = w1.integrate_from(0);
        } else if (col.osc_sigma == +1) {
            out.c1 = -(w2.integrate_from(1));
            out.c2 = from_values(grid, osc_cumint_forward(w1, d.rho, lambda));
        } else {
            throw std::invalid_argument("apply_V: V2 supports oscillation channels 0 and +1");
        }
    } else {
        throw std::invalid_argument("apply_V: k must be 1 or 2");
    }
    return out;
}

double operator_norm_probe(const DerivedQuantities& d, int k, Complex lambda, bool squared) {
    const auto& grid = d.rho.grid();
    std::vector<ColumnFunction> probes;
    auto push = [&](GridFunction f1, GridFunction f2) {
        ColumnFunction c;
        c.c1 = std::move(f1);
        c.c2 = std::move(f2);
        const double s = c.mantissa_sup();
        if (s > 0.0) {
            c.c1 = Complex(1.0 / s) * c.c1;
            c.c2 = Complex(1.0 / s) * c.c2;
        }
        probes.push_back(std::move(c));
    };
    const GridFunction one = GridFunction::constant(grid, 1.0);
    const GridFunction zero = GridFunction::constant(grid, 0.0);
    push(one, zero);
    push(zero, one);
    push(one, one);
    push(one, -one);
    push(one, Complex(0.0, 1.0) * one);
    const GridFunction s21 = d.q21.map([](const Complex& z) { return signum(z); });
    const GridFunction s12 = d.q12.map([](const Complex& z) { return signum(z); });
    push(s21, zero);
    push(zero, s12);
    push(s21, s12);
    // phase-matched probes cancel the kernel oscillation for complex lambda
    const double im = lambda.imag();
    if (im != 0.0) {
        auto phase = [&](double sign) {
            std::vector<Complex> v(static_cast<size_t>(grid->size()));
            for (int j = 0; j < grid->size(); ++j)
                v[static_cast<size_t>(j)] =
                    std::exp(Complex(0.0, sign * im * d.rho.values()[static_cast<size_t>(j)].real()));
            return GridFunction(grid, std::move(v), 0);
        };
        push(s21 * phase(-1.0), zero);
        push(zero, s12 * phase(+1.0));
    }

    double norm = 0.0;
    for (const auto& p : probes) {
        ColumnFunction img = apply_V(d, k, lambda, p);
        if (squared) img = apply_V(d, k, lambda, img);
        norm = std::max(norm, img.mantissa_sup());
    }
    return norm;
}

ColumnFunction neumann_solve(const DerivedQuantities& d, int k, Complex lambda, int n) {
    if (n < 0) throw std::invalid_argument("neumann_solve: n must be nonnegative");
    const auto est = estimate_remainders(d, lambda, 0.0);
    if (!est.contraction()) {
        std::ostringstream os;
        os << "neumann_solve: contraction C_q_int * Upsilon = " << est.c_q_int * est.upsilon
           << " >= 1/2 at |lambda| = " << std::abs(lambda) << "; increase |lambda|";
        throw ContractionError(os.str());
    }
    ColumnFunction z = unit_column(d.rho.grid(), k);
    ColumnFunction term = z;
    for (int nu = 1; nu <= 2 * n + 1; ++nu) {
        term = apply_V(d, k, lambda, term);
        z.c1 = z.c1 + term.c1;
        z.c2 = z.c2 + term.c2;
    }
    return z;
}

Deoscillated deoscillate(const DerivedQuantities& d, const ExpansionTable& table,
                         const ColumnFunction& z1, const ColumnFunction& z2, Complex lambda) {
    if (z1.osc_sigma != 0 || z2.osc_sigma != 0)
        throw std::invalid_argument("deoscillate: inputs must have no attached oscillation channel");
    const auto& grid = common_grid(z1.c1, z2.c1);

    // formal-expansion endpoint values sum_m r^m_21(0) lambda^{-m}, r^m_12(1)
    Complex fml21_0(0.0), fml12_1(0.0);
    Complex invpow(1.0);
    for (const auto& term : table.terms()) {
        invpow /= lambda;
        fml21_0 += invpow * term.r21.values().front();
        fml12_1 += invpow * term.r12.values().back();
    }

    const Complex z22_0 = z2.c2.values().front();
    const Complex z11_1 = z1.c1.values().back();
    if (std::abs(z22_0) < 1e-8 || std::abs(z11_1) < 1e-8)
        throw ConditioningError("deoscillate: endpoint system is near-singular");

    Deoscillated out;
    out.C1 = (z1.c2.values().front() - fml21_0) / z22_0;
    out.C2 = (z2.c1.values().back() - fml12_1) / z11_1;

    const auto& rv = d.rho.values();
    const double rho1 = d.rho1();
    const size_t P = rv.size();
    std::vector<Complex> h11(P), h21(P), h12(P), h22(P);
    for (size_t j = 0; j < P; ++j) {
        const Complex osc1 = std::exp(-lambda * rv[j].real());          // bounded in the half-plane
        const Complex osc2 = std::exp(lambda * (rv[j].real() - rho1));  // likewise
        h11[j] = z1.c1.values()[j] - out.C1 * osc1 * z2.c1.values()[j];
        h21[j] = z1.c2.values()[j] - out.C1 * osc1 * z2.c2.values()[j];
        h12[j] = z2.c1.values()[j] - out.C2 * osc2 * z1.c1.values()[j];
        h22[j] = z2.c2.values()[j] - out.C2 * osc2 * z1.c2.values()[j];
    }
    out.zhat1.c1 = GridFunction(grid, std::move(h11), 0);
    out.zhat1.c2 = GridFunction(grid, std::move(h21), 0);
    out.zhat2.c1 = GridFunction(grid, std::move(h12), 0);
    out.zhat2.c2 = GridFunction(grid, std::move(h22), 0);
    return out;
}

double suggest_lambda0(const DerivedQuantities& d, double kappa, double arg) {
    double modulus = 1.0;
    for (int k = 0; k < 40; ++k) {
        const Complex lambda = modulus * std::exp(Complex(0.0, arg));
        if (estimate_remainders(d, lambda, kappa).contraction()) return modulus;
        modulus *= 2.0;
    }
    throw std::runtime_error("suggest_lambda0: contraction not reached within scan range");
}

}  // namespace odeasym
