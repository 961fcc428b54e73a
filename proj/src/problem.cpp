#include "odeasym/problem.hpp"

#include <cmath>
#include <sstream>

namespace odeasym {

namespace {

constexpr double kRealTol = 1e-12;

void check_real_sign(const GridFunction& f, const char* name, int sign,
                     std::vector<ValidationIssue>& issues) {
    const auto& xs = f.grid()->nodes();
    for (size_t j = 0; j < xs.size(); ++j) {
        const Complex v = f.values()[j];
        if (std::abs(v.imag()) > kRealTol * (1.0 + std::abs(v))) {
            std::ostringstream os;
            os << name << " must be real; found imaginary part " << v.imag() << " at x = " << xs[j];
            issues.push_back({ValidationIssue::Kind::SignViolation, os.str()});
            return;
        }
        if (sign * v.real() <= 0.0) {
            std::ostringstream os;
            os << name << " must be " << (sign > 0 ? "positive" : "negative") << "; found "
               << v.real() << " at x = " << xs[j];
            issues.push_back({ValidationIssue::Kind::SignViolation, os.str()});
            return;
        }
    }
}

void check_hint(const GridFunction& f, const char* name, int need,
                std::vector<ValidationIssue>& issues) {
    if (f.smoothness_hint() < need) {
        std::ostringstream os;
        os << name << " needs smoothness_hint >= " << need << " for expansion order, has "
           << f.smoothness_hint();
        issues.push_back({ValidationIssue::Kind::SmoothnessShortfall, os.str()});
    }
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << issues[i].message;
    }
    return os.str();
}

ValidationReport validate(const SystemCoefficients& coeffs) {
    ValidationReport report;
    const GridFunction* all[] = {&coeffs.a1, &coeffs.a2, &coeffs.b11,
                                 &coeffs.b12, &coeffs.b21, &coeffs.b22};
    for (const auto* f : all) {
        if (!f->valid()) {
            report.issues.push_back({ValidationIssue::Kind::GridMismatch,
                                     "coefficient function is uninitialized"});
            return report;
        }
        if (f->grid() != coeffs.a1.grid()) {
            report.issues.push_back({ValidationIssue::Kind::GridMismatch,
                                     "coefficient functions live on different grids"});
            return report;
        }
    }

    check_real_sign(coeffs.a1, "a1", +1, report.issues);
    check_real_sign(coeffs.a2, "a2", -1, report.issues);

    if (coeffs.epsilon <= 0.0) {
        report.issues.push_back({ValidationIssue::Kind::SeparationViolation,
                                 "epsilon must be positive"});
    } else {
        const auto& xs = coeffs.a1.grid()->nodes();
        for (size_t j = 0; j < xs.size(); ++j) {
            const double gap = coeffs.a1.values()[j].real() - coeffs.a2.values()[j].real();
            if (gap < coeffs.epsilon) {
                std::ostringstream os;
                os << "a1 - a2 = " << gap << " < epsilon = " << coeffs.epsilon
                   << " at x = " << xs[j];
                report.issues.push_back({ValidationIssue::Kind::SeparationViolation, os.str()});
                break;
            }
        }
    }

    const int n = coeffs.order;
    if (n < 0) {
        report.issues.push_back({ValidationIssue::Kind::SmoothnessShortfall,
                                 "expansion order must be nonnegative"});
    } else if (n >= 1) {
        check_hint(coeffs.a1, "a1", n, report.issues);
        check_hint(coeffs.a2, "a2", n, report.issues);
        check_hint(coeffs.b12, "b12", n, report.issues);
        check_hint(coeffs.b21, "b21", n, report.issues);
        check_hint(coeffs.b11, "b11", n - 1, report.issues);
        check_hint(coeffs.b22, "b22", n - 1, report.issues);
    }
    return report;
}

void require_valid(const SystemCoefficients& coeffs) {
    auto report = validate(coeffs);
    if (!report.ok()) throw std::invalid_argument("invalid system coefficients: " + report.summary());
}

DerivedQuantities derive(const SystemCoefficients& coeffs) {
    DerivedQuantities d;
    d.a = coeffs.a1 - coeffs.a2;
    d.int_b11 = coeffs.b11.integrate_from(0);
    d.int_b22 = coeffs.b22.integrate_from(0);
    d.b = exp(d.int_b11 - d.int_b22);
    d.A1 = coeffs.a1.integrate_from(0);
    d.A2 = coeffs.a2.integrate_from(0);
    d.rho = d.A1 - d.A2;
    d.q12 = coeffs.b12 / d.b;
    d.q21 = coeffs.b21 * d.b;
    if (d.rho1() <= 0.0) throw std::logic_error("derive: rho(1) must be positive");
    return d;
}

Mat2 matrix_M(const DerivedQuantities& d, double x) {
    Mat2 m;
    m(0, 0) = std::exp(d.int_b11.evaluate(x));
    m(1, 1) = std::exp(d.int_b22.evaluate(x));
    return m;
}

DiagExponents matrix_E(const DerivedQuantities& d, double x, Complex lambda) {
    return DiagExponents{lambda * d.A1.evaluate(x), lambda * d.A2.evaluate(x)};
}

SystemCoefficients mirrored(const SystemCoefficients& coeffs) {
    SystemCoefficients m;
    m.a1 = -coeffs.a2;
    m.a2 = -coeffs.a1;
    m.b11 = coeffs.b22;
    m.b12 = coeffs.b21;
    m.b21 = coeffs.b12;
    m.b22 = coeffs.b11;
    m.order = coeffs.order;
    m.epsilon = coeffs.epsilon;
    return m;
}

}  // namespace odeasym
