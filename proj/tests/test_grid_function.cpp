#include <cmath>
#include <random>

#include "doctest.h"
#include "odeasym/grid_function.hpp"

using namespace odeasym;

namespace {
GridFunction sampled(int size, double (*f)(double), int hint = kSmooth) {
    return GridFunction::sample(ChebGrid::make(size), [&](double x) { return Complex(f(x)); },
                                hint);
}
}  // namespace

TEST_CASE("grid nodes are strictly increasing with exact endpoints") {
    auto g = ChebGrid::make(64);
    CHECK(g->node(0) == 0.0);
    CHECK(g->node(63) == 1.0);
    for (int j = 0; j + 1 < 64; ++j) CHECK(g->node(j) < g->node(j + 1));
}

TEST_CASE("evaluation is exact at nodes and interpolates between") {
    auto g = ChebGrid::make(64);
    auto f = GridFunction::sample(g, [](double x) { return std::exp(x); });
    for (int j = 0; j < 64; ++j) CHECK(f.evaluate(g->node(j)) == f.values()[(size_t)j]);

    CHECK(std::abs(GridFunction::constant(g, 1.0).evaluate(0.37) - 1.0) == 0.0);
    auto lin = GridFunction::sample(g, [](double x) { return x; });
    CHECK(std::abs(lin.evaluate(0.5) - 0.5) < 1e-14);
    CHECK(std::abs(f.evaluate(0.25) - std::exp(0.25)) < 1e-12);
}

TEST_CASE("evaluation outside [0,1] is a domain error") {
    auto f = sampled(16, [](double x) { return x; });
    CHECK_THROWS_AS(f.evaluate(-0.01), std::domain_error);
    CHECK_THROWS_AS(f.evaluate(1.01), std::domain_error);
}

TEST_CASE("spectral derivative") {
    auto g = ChebGrid::make(64);
    SUBCASE("constant maps to zero") {
        auto d = GridFunction::constant(g, Complex(2.5, -1.0)).derivative();
        CHECK(d.max_abs() < 1e-13);
    }
    SUBCASE("x^2 -> 2x") {
        auto d = GridFunction::sample(g, [](double x) { return x * x; }).derivative();
        for (int j = 0; j < 64; ++j)
            CHECK(std::abs(d.values()[(size_t)j] - 2.0 * g->node(j)) < 1e-10);
    }
    SUBCASE("sin(3x) -> 3cos(3x)") {
        auto d = GridFunction::sample(g, [](double x) { return std::sin(3 * x); }).derivative();
        for (int j = 0; j < 64; ++j)
            CHECK(std::abs(d.values()[(size_t)j] - 3.0 * std::cos(3 * g->node(j))) < 1e-8);
    }
    SUBCASE("budget is consumed and eventually errors") {
        auto f = GridFunction::sample(g, [](double x) { return x * x; }, 1);
        auto d = f.derivative();
        CHECK(d.smoothness_hint() == 0);
        CHECK_THROWS_AS(d.derivative(), SmoothnessError);
    }
}

TEST_CASE("indefinite integration from both bases") {
    auto g = ChebGrid::make(64);
    auto one = GridFunction::constant(g, 1.0);
    auto F0 = one.integrate_from(0);
    auto F1 = one.integrate_from(1);
    for (int j = 0; j < 64; ++j) {
        CHECK(std::abs(F0.values()[(size_t)j] - g->node(j)) < 1e-13);
        CHECK(std::abs(F1.values()[(size_t)j] - (1.0 - g->node(j))) < 1e-13);
    }
    CHECK(F0.values().front() == Complex(0.0));
    CHECK(F1.values().back() == Complex(0.0));

    auto two_x = GridFunction::sample(g, [](double x) { return 2.0 * x; });
    auto F = two_x.integrate_from(0);
    for (int j = 0; j < 64; ++j)
        CHECK(std::abs(F.values()[(size_t)j] - g->node(j) * g->node(j)) < 1e-10);
}

TEST_CASE("definite integrals") {
    auto g = ChebGrid::make(64);
    CHECK(std::abs(GridFunction::constant(g, 1.0).definite_integral() - 1.0) < 1e-14);
    auto lin = GridFunction::sample(g, [](double x) { return x; });
    CHECK(std::abs(lin.definite_integral() - 0.5) < 1e-14);
    auto e = GridFunction::sample(g, [](double x) { return std::exp(x); });
    CHECK(std::abs(e.definite_integral() - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("derivative of antiderivative recovers the function") {
    auto g = ChebGrid::make(64);
    auto f = GridFunction::sample(g, [](double x) { return std::sin(3 * x) + x * x; });
    auto r = f.integrate_from(0).derivative() - f;
    CHECK(r.max_abs() < 1e-8);
}

TEST_CASE("integration is linear") {
    auto g = ChebGrid::make(48);
    auto f = GridFunction::sample(g, [](double x) { return std::sin(2 * x); });
    auto h = GridFunction::sample(g, [](double x) { return std::exp(-x); });
    const Complex alpha(1.3, -0.4), beta(-0.7, 2.1);
    for (int base : {0, 1}) {
        auto lhs = (alpha * f + beta * h).integrate_from(base);
        auto rhs = alpha * f.integrate_from(base) + beta * h.integrate_from(base);
        CHECK((lhs - rhs).max_abs() < 1e-14);
    }
}

TEST_CASE("grid refinement converges at least 4x per doubling until the floor") {
    auto probe = [](int size) {
        auto f = sampled(size, [](double x) { return std::exp(std::sin(3 * x)); });
        double err = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            err = std::max(err, std::abs(f.evaluate(x) - std::exp(std::sin(3 * x))));
        }
        return err;
    };
    double prev = probe(8);
    for (int size : {16, 32, 64}) {
        const double cur = probe(size);
        if (prev > 1e-12) CHECK(cur < prev / 4.0);
        prev = cur;
    }
    CHECK(prev < 1e-12);
}

TEST_CASE("resampling onto a finer grid preserves values") {
    auto f = sampled(32, [](double x) { return std::cos(2 * x); });
    auto fine = f.resample(ChebGrid::make(80));
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(std::abs(fine.evaluate(x) - f.evaluate(x)) < 1e-11);
    }
}

TEST_CASE("arithmetic requires a common grid") {
    auto f = sampled(16, [](double x) { return x; });
    auto h = sampled(24, [](double x) { return x; });
    CHECK_THROWS_AS(f + h, std::invalid_argument);
}
