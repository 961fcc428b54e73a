#include "odeasym/expansion.hpp"

#include <algorithm>
#include <sstream>

namespace odeasym {

namespace {

// (I1 f)(x) = -int_x^1 q12 f dt ; (I2 f)(x) = int_0^x q21 f dt.
GridFunction apply_I1(const DerivedQuantities& d, const GridFunction& f) {
    return -((d.q12 * f).integrate_from(1));
}
GridFunction apply_I2(const DerivedQuantities& d, const GridFunction& f) {
    return (d.q21 * f).integrate_from(0);
}
GridFunction apply_D(const DerivedQuantities& d, const GridFunction& f) {
    return f.derivative() / d.a;
}

}  // namespace

int FunctionMatrix::min_hint() const {
    return std::min(std::min(r11.smoothness_hint(), r12.smoothness_hint()),
                    std::min(r21.smoothness_hint(), r22.smoothness_hint()));
}

Mat2 ExpansionTable::partial_sum(double x, Complex lambda) const {
    Mat2 s = Mat2::identity();
    Complex invpow(1.0);
    for (const auto& term : terms_) {
        invpow /= lambda;
        s(0, 0) += invpow * term.r11.evaluate(x);
        s(0, 1) += invpow * term.r12.evaluate(x);
        s(1, 0) += invpow * term.r21.evaluate(x);
        s(1, 1) += invpow * term.r22.evaluate(x);
    }
    return s;
}

FunctionMatrix first_order(const DerivedQuantities& d) {
    FunctionMatrix R;
    R.r21 = d.q21 / d.a;
    R.r12 = -(d.q12 / d.a);
    R.r11 = apply_I1(d, R.r21);
    R.r22 = apply_I2(d, R.r12);
    return R;
}

FunctionMatrix next_order(const DerivedQuantities& d, const FunctionMatrix& Rm, int m) {
    FunctionMatrix R;
    try {
        const GridFunction j1 = (d.q21 / d.a) * apply_I1(d, Rm.r21);
        const GridFunction j2 = -((d.q12 / d.a) * apply_I2(d, Rm.r12));
        R.r21 = -apply_D(d, Rm.r21) + j1;
        R.r12 = apply_D(d, Rm.r12) + j2;
    } catch (const SmoothnessError&) {
        std::ostringstream os;
        os << "smoothness budget exhausted after order " << m << " (cannot build order "
           << m + 1 << ")";
        throw SmoothnessError(os.str(), m);
    }
    R.r11 = apply_I1(d, R.r21);
    R.r22 = apply_I2(d, R.r12);
    return R;
}

ExpansionTable build_table(const SystemCoefficients& coeffs, const DerivedQuantities& d) {
    if (coeffs.order < 1)
        throw std::invalid_argument("build_table: expansion order must be at least 1");
    std::vector<FunctionMatrix> terms;
    terms.reserve(static_cast<size_t>(coeffs.order));
    terms.push_back(first_order(d));
    for (int m = 1; m < coeffs.order; ++m) terms.push_back(next_order(d, terms.back(), m));
    return ExpansionTable(std::move(terms));
}

ColumnScaledMat2 eval_Y_asym(const ExpansionTable& table, const DerivedQuantities& d,
                             double x, Complex lambda) {
    ColumnScaledMat2 out;
    out.mantissa = matrix_M(d, x) * table.partial_sum(x, lambda);
    const DiagExponents ee = matrix_E(d, x, lambda);
    out.col_exponent = {ee.e1, ee.e2};
    return out;
}

}  // namespace odeasym
