#include "odeasym/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace odeasym {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

ChebGrid::ChebGrid(int size) : size_(size) {
    if (size < 2) throw std::invalid_argument("ChebGrid: need at least 2 nodes");
    const int N = size - 1;
    const size_t P = static_cast<size_t>(size);

    nodes_.resize(P);
    for (int j = 0; j <= N; ++j) {
        const double s = std::sin(kPi * j / (2.0 * N));
        nodes_[static_cast<size_t>(j)] = s * s;  // exact 0 and 1 at the ends
    }

    bary_weights_.resize(P);
    for (int j = 0; j <= N; ++j) {
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == N) w *= 0.5;
        bary_weights_[static_cast<size_t>(j)] = w;
    }

    // Interpolant in t = 1-2x: f(x_j) = g(t_j), t_j = cos(pi j / N),
    // g(t) = sum_k a_k T_k(t).
    analysis_.assign(P * P, 0.0);
    synthesis_.assign(P * P, 0.0);
    for (int k = 0; k <= N; ++k) {
        const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
        for (int j = 0; j <= N; ++j) {
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double c = std::cos(kPi * j * k / N);
            analysis_[static_cast<size_t>(k) * P + static_cast<size_t>(j)] = 2.0 / (N * ck * cj) * c;
            synthesis_[static_cast<size_t>(j) * P + static_cast<size_t>(k)] = c;
        }
    }

    // int_0^1 f dx = (1/2) sum_{k even} a_k * 2/(1-k^2); weights fold the
    // analysis matrix into one vector.
    quad_weights_.assign(P, 0.0);
    for (int k = 0; k <= N; k += 2) {
        const double ik = 1.0 / (1.0 - static_cast<double>(k) * k);  // k=0 -> 1
        for (int j = 0; j <= N; ++j)
            quad_weights_[static_cast<size_t>(j)] +=
                analysis_[static_cast<size_t>(k) * P + static_cast<size_t>(j)] * ik;
    }
}

std::shared_ptr<const ChebGrid> ChebGrid::make(int size) {
    static std::mutex mu;
    static std::map<int, std::weak_ptr<const ChebGrid>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[size];
    if (auto g = slot.lock()) return g;
    auto g = std::make_shared<const ChebGrid>(size);
    slot = g;
    return g;
}

std::vector<Complex> ChebGrid::to_cheb(const std::vector<Complex>& values) const {
    const size_t P = static_cast<size_t>(size_);
    std::vector<Complex> a(P, Complex(0.0));
    for (size_t k = 0; k < P; ++k) {
        Complex acc(0.0);
        const double* row = &analysis_[k * P];
        for (size_t j = 0; j < P; ++j) acc += row[j] * values[j];
        a[k] = acc;
    }
    return a;
}

std::vector<Complex> ChebGrid::from_cheb(const std::vector<Complex>& coeff) const {
    const size_t P = static_cast<size_t>(size_);
    std::vector<Complex> v(P, Complex(0.0));
    for (size_t j = 0; j < P; ++j) {
        Complex acc(0.0);
        const double* row = &synthesis_[j * P];
        for (size_t k = 0; k < P && k < coeff.size(); ++k) acc += row[k] * coeff[k];
        v[j] = acc;
    }
    return v;
}

Complex ChebGrid::interpolate(const std::vector<Complex>& values, double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("GridFunction: evaluation point outside [0,1]");
    const size_t P = static_cast<size_t>(size_);
    Complex num(0.0), den(0.0);
    for (size_t j = 0; j < P; ++j) {
        const double d = x - nodes_[j];
        if (d == 0.0) return values[j];
        const double w = bary_weights_[j] / d;
        num += w * values[j];
        den += w;
    }
    return num / den;
}

GridFunction::GridFunction(std::shared_ptr<const ChebGrid> grid, std::vector<Complex> values,
                           int smoothness_hint)
    : grid_(std::move(grid)), values_(std::move(values)), smoothness_hint_(smoothness_hint) {
    if (values_.size() != static_cast<size_t>(grid_->size()))
        throw std::invalid_argument("GridFunction: values length does not match grid size");
    if (smoothness_hint_ < 0)
        throw std::invalid_argument("GridFunction: smoothness hint must be nonnegative");
}

GridFunction GridFunction::constant(std::shared_ptr<const ChebGrid> grid, Complex c,
                                    int smoothness_hint) {
    std::vector<Complex> v(static_cast<size_t>(grid->size()), c);
    return GridFunction(std::move(grid), std::move(v), smoothness_hint);
}

GridFunction GridFunction::with_hint(int hint) const { return GridFunction(grid_, values_, hint); }

Complex GridFunction::evaluate(double x) const { return grid_->interpolate(values_, x); }

GridFunction GridFunction::derivative() const {
    if (smoothness_hint_ < 1)
        throw SmoothnessError("derivative: smoothness budget exhausted (hint is 0)");
    const int N = grid_->size() - 1;
    auto a = grid_->to_cheb(values_);
    std::vector<Complex> b(static_cast<size_t>(N + 1), Complex(0.0));
    // Chebyshev derivative recurrence in t, then chain rule for t = 1-2x.
    for (int k = N; k >= 1; --k) {
        const Complex up = (k + 1 <= N) ? b[static_cast<size_t>(k + 1)] : Complex(0.0);
        b[static_cast<size_t>(k - 1)] = up + 2.0 * static_cast<double>(k) * a[static_cast<size_t>(k)];
    }
    b[0] *= 0.5;
    auto dv = grid_->from_cheb(b);
    for (auto& z : dv) z *= -2.0;
    return GridFunction(grid_, std::move(dv), smoothness_hint_ == kSmooth ? kSmooth : smoothness_hint_ - 1);
}

GridFunction GridFunction::integrate_from(int base) const {
    if (base != 0 && base != 1)
        throw std::invalid_argument("integrate_from: base must be 0 or 1");
    const int N = grid_->size() - 1;
    auto a = grid_->to_cheb(values_);
    // Antiderivative G of the interpolant in t; one extra mode keeps degree-N
    // inputs exact.
    std::vector<Complex> A(static_cast<size_t>(N + 2), Complex(0.0));
    auto coef = [&](int k) -> Complex {
        return (k >= 0 && k <= N) ? a[static_cast<size_t>(k)] : Complex(0.0);
    };
    A[1] = coef(0) - 0.5 * coef(2);
    for (int k = 2; k <= N + 1; ++k)
        A[static_cast<size_t>(k)] = (coef(k - 1) - coef(k + 1)) / (2.0 * k);

    const size_t P = static_cast<size_t>(N + 1);
    std::vector<Complex> G(P, Complex(0.0));
    {
        auto head = std::vector<Complex>(A.begin(), A.begin() + static_cast<long>(P));
        G = grid_->from_cheb(head);
        // top mode T_{N+1}(t_j) = cos((N+1) pi j / N)
        for (int j = 0; j <= N; ++j)
            G[static_cast<size_t>(j)] += A[static_cast<size_t>(N + 1)] *
                                         std::cos(kPi * (N + 1) * j / N);
    }
    // F(x) = int_0^x f = (G(1) - G(t(x)))/2 ; int_x^1 f = (G(t(x)) - G(-1))/2.
    std::vector<Complex> F(P);
    if (base == 0) {
        const Complex G1 = G[0];  // t = 1 is node j = 0 (x = 0)
        for (size_t j = 0; j < P; ++j) F[j] = 0.5 * (G1 - G[j]);
        F[0] = Complex(0.0);
    } else {
        const Complex Gm1 = G[P - 1];  // t = -1 is x = 1
        for (size_t j = 0; j < P; ++j) F[j] = 0.5 * (G[j] - Gm1);
        F[P - 1] = Complex(0.0);
    }
    const int hint = smoothness_hint_ == kSmooth ? kSmooth : smoothness_hint_ + 1;
    return GridFunction(grid_, std::move(F), hint);
}

Complex GridFunction::definite_integral() const {
    const auto& w = grid_->quadrature_weights();
    Complex acc(0.0);
    for (size_t j = 0; j < values_.size(); ++j) acc += w[j] * values_[j];
    return acc;
}

GridFunction GridFunction::resample(std::shared_ptr<const ChebGrid> grid) const {
    if (grid == grid_) return *this;
    std::vector<Complex> v(static_cast<size_t>(grid->size()));
    for (int j = 0; j < grid->size(); ++j) v[static_cast<size_t>(j)] = evaluate(grid->node(j));
    return GridFunction(std::move(grid), std::move(v), smoothness_hint_);
}

GridFunction GridFunction::map(Complex (*f)(const Complex&)) const {
    std::vector<Complex> v(values_.size());
    for (size_t j = 0; j < values_.size(); ++j) v[j] = f(values_[j]);
    return GridFunction(grid_, std::move(v), smoothness_hint_);
}

GridFunction GridFunction::abs() const {
    std::vector<Complex> v(values_.size());
    for (size_t j = 0; j < values_.size(); ++j) v[j] = std::abs(values_[j]);
    return GridFunction(grid_, std::move(v), smoothness_hint_);
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

const std::shared_ptr<const ChebGrid>& common_grid(const GridFunction& f, const GridFunction& g) {
    if (f.grid() != g.grid())
        throw std::invalid_argument("GridFunction: operands live on different grids");
    return f.grid();
}

namespace {
template <class Op>
GridFunction zip(const GridFunction& f, const GridFunction& g, Op op) {
    const auto& grid = common_grid(f, g);
    std::vector<Complex> v(f.values().size());
    for (size_t j = 0; j < v.size(); ++j) v[j] = op(f.values()[j], g.values()[j]);
    return GridFunction(grid, std::move(v), std::min(f.smoothness_hint(), g.smoothness_hint()));
}
}  // namespace

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](Complex x, Complex y) { return x + y; });
}
GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](Complex x, Complex y) { return x - y; });
}
GridFunction operator*(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](Complex x, Complex y) { return x * y; });
}
GridFunction operator/(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](Complex x, Complex y) { return x / y; });
}
GridFunction operator*(Complex c, const GridFunction& f) {
    std::vector<Complex> v(f.values().size());
    for (size_t j = 0; j < v.size(); ++j) v[j] = c * f.values()[j];
    return GridFunction(f.grid(), std::move(v), f.smoothness_hint());
}
GridFunction operator-(const GridFunction& f) { return Complex(-1.0) * f; }

GridFunction exp(const GridFunction& f) {
    std::vector<Complex> v(f.values().size());
    for (size_t j = 0; j < v.size(); ++j) v[j] = std::exp(f.values()[j]);
    return GridFunction(f.grid(), std::move(v), f.smoothness_hint());
}

}  // namespace odeasym
