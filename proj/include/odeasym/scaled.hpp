// Exponent-shifted complex scalars and 2x2 matrices: value = mantissa * exp(log_scale).
// Keeps products with exp(lambda*A_i(x)) representable far past double range.
#ifndef ODEASYM_SCALED_HPP
#define ODEASYM_SCALED_HPP

#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace odeasym {

using Complex = std::complex<double>;

struct ScaledComplex {
    Complex mantissa{0.0};
    double log_scale{0.0};

    static ScaledComplex from(Complex value) { return ScaledComplex{value, 0.0}.normalized(); }
    static ScaledComplex from_exponent(Complex exponent) {
        // exp(exponent) with the modulus kept in the scale channel
        return ScaledComplex{std::exp(Complex(0.0, exponent.imag())), exponent.real()};
    }

    ScaledComplex normalized() const {
        const double m = std::abs(mantissa);
        if (m == 0.0) return ScaledComplex{Complex(0.0), 0.0};
        return ScaledComplex{mantissa / m, log_scale + std::log(m)};
    }

    Complex to_complex() const { return mantissa * std::exp(log_scale); }
    double log_abs() const {
        const double m = std::abs(mantissa);
        return m == 0.0 ? -std::numeric_limits<double>::infinity() : log_scale + std::log(m);
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        return ScaledComplex{a.mantissa * b.mantissa, a.log_scale + b.log_scale}.normalized();
    }
    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (std::abs(a.mantissa) == 0.0) return b;
        if (std::abs(b.mantissa) == 0.0) return a;
        const double s = std::max(a.log_scale, b.log_scale);
        const Complex m = a.mantissa * std::exp(a.log_scale - s) + b.mantissa * std::exp(b.log_scale - s);
        return ScaledComplex{m, s}.normalized();
    }
};

// |a - b| / max(|a|,|b|,floor), evaluated without leaving the log domain.
inline double relative_difference(const ScaledComplex& a, const ScaledComplex& b,
                                  double floor_log = -745.0) {
    const double s = std::max({a.log_scale, b.log_scale, floor_log});
    const Complex da = a.mantissa * std::exp(a.log_scale - s);
    const Complex db = b.mantissa * std::exp(b.log_scale - s);
    const double scale = std::max({std::abs(da), std::abs(db), std::exp(floor_log - s)});
    return std::abs(da - db) / scale;
}

struct Mat2 {
    std::array<std::array<Complex, 2>, 2> e{{{Complex(0.0), Complex(0.0)},
                                             {Complex(0.0), Complex(0.0)}}};

    static Mat2 identity() {
        Mat2 m;
        m.e[0][0] = m.e[1][1] = Complex(1.0);
        return m;
    }
    Complex& operator()(int i, int j) { return e[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    const Complex& operator()(int i, int j) const {
        return e[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 c;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        return c;
    }
    Complex det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }
};

// 2x2 matrix whose k-th column carries a separate exponential factor
// exp(col_exponent[k]); entries are value = mantissa(i,k) * exp(col_exponent[k]).
struct ColumnScaledMat2 {
    Mat2 mantissa;
    std::array<Complex, 2> col_exponent{Complex(0.0), Complex(0.0)};

    ScaledComplex entry(int i, int k) const {
        return ScaledComplex::from(mantissa(i, k)) * ScaledComplex::from_exponent(col_exponent[static_cast<size_t>(k)]);
    }
};

}  // namespace odeasym

#endif
