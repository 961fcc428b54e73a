// Explicit expansion matrices R^1..R^n of the normalized fundamental matrix
// Z = M^{-1} Y E^{-1} ~ I + sum_m R^m(x) lambda^{-m}, built by the closed-form
// integro-differential recurrences, plus evaluation of the asymptotic Y.
#ifndef ODEASYM_EXPANSION_HPP
#define ODEASYM_EXPANSION_HPP

#include <vector>

#include "odeasym/problem.hpp"

namespace odeasym {

struct FunctionMatrix {
    GridFunction r11, r12, r21, r22;

    const GridFunction& entry(int i, int j) const {
        return i == 0 ? (j == 0 ? r11 : r12) : (j == 0 ? r21 : r22);
    }
    Mat2 at(double x) const {
        Mat2 m;
        m(0, 0) = r11.evaluate(x);
        m(0, 1) = r12.evaluate(x);
        m(1, 0) = r21.evaluate(x);
        m(1, 1) = r22.evaluate(x);
        return m;
    }
    int min_hint() const;
};

class ExpansionTable {
public:
    ExpansionTable() = default;
    explicit ExpansionTable(std::vector<FunctionMatrix> terms) : terms_(std::move(terms)) {}

    int order() const { return static_cast<int>(terms_.size()); }
    // 1-based: R(1) is the lambda^{-1} coefficient.
    const FunctionMatrix& R(int m) const { return terms_.at(static_cast<size_t>(m - 1)); }
    const std::vector<FunctionMatrix>& terms() const { return terms_; }

    // I + sum_m R^m(x) lambda^{-m} evaluated entrywise at x.
    Mat2 partial_sum(double x, Complex lambda) const;

private:
    std::vector<FunctionMatrix> terms_;
};

// R^1: off-diagonals q21/a and -q12/a, diagonals fixed by integrating the
// coupling from x=1 (row 1) and x=0 (row 2).
FunctionMatrix first_order(const DerivedQuantities& d);

// R^{m+1} from R^m: r21 -> (-D + J1) r21, r12 -> (D + J2) r12, diagonals via
// the same endpoint-anchored integrals. m is the order of the input matrix.
FunctionMatrix next_order(const DerivedQuantities& d, const FunctionMatrix& Rm, int m);

// R^1..R^n for n = coeffs.order (requires n >= 1). Smoothness budget errors
// carry the highest order that was still buildable.
ExpansionTable build_table(const SystemCoefficients& coeffs, const DerivedQuantities& d);

// M(x) (I + sum R^m lambda^{-m}) E(x,lambda) with E kept as column exponents.
ColumnScaledMat2 eval_Y_asym(const ExpansionTable& table, const DerivedQuantities& d,
                             double x, Complex lambda);

}  // namespace odeasym

#endif
