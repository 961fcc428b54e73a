// Chebyshev-Lobatto collocation calculus on [0,1]: barycentric interpolation,
// spectral differentiation and indefinite integration, Clenshaw-Curtis quadrature.
#ifndef ODEASYM_GRID_FUNCTION_HPP
#define ODEASYM_GRID_FUNCTION_HPP

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace odeasym {

using Complex = std::complex<double>;

// Smoothness hint for functions treated as infinitely differentiable.
inline constexpr int kSmooth = 1 << 20;

// Default collocation size used by the higher-level modules.
inline constexpr int kDefaultGridSize = 256;

// Thrown when an operation would consume more derivatives than a function's
// declared smoothness budget provides.
class SmoothnessError : public std::runtime_error {
public:
    SmoothnessError(std::string what, int completed_order = -1)
        : std::runtime_error(std::move(what)), completed_order_(completed_order) {}
    // Highest expansion order that was still within budget, when known.
    int completed_order() const { return completed_order_; }

private:
    int completed_order_;
};

// Immutable Chebyshev-Lobatto grid with cached transform and quadrature data.
// Nodes are x_j = sin^2(pi j / (2N)), j = 0..N, strictly increasing with
// x_0 = 0 and x_N = 1 exactly.
class ChebGrid {
public:
    explicit ChebGrid(int size);

    // Shared, cached instance per size.
    static std::shared_ptr<const ChebGrid> make(int size);

    int size() const { return size_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int j) const { return nodes_[static_cast<size_t>(j)]; }

    // Values at nodes -> Chebyshev coefficients of the interpolant (in the
    // mapped variable t = 1-2x) and back.
    std::vector<Complex> to_cheb(const std::vector<Complex>& values) const;
    std::vector<Complex> from_cheb(const std::vector<Complex>& coeff) const;

    // Barycentric interpolation of sampled values; exact at the nodes.
    Complex interpolate(const std::vector<Complex>& values, double x) const;

    const std::vector<double>& quadrature_weights() const { return quad_weights_; }

private:
    int size_;                       // number of nodes P = N+1
    std::vector<double> nodes_;
    std::vector<double> bary_weights_;
    std::vector<double> analysis_;   // (P x P) values -> coefficients
    std::vector<double> synthesis_;  // (P x P) coefficients -> values
    std::vector<double> quad_weights_;
};

// A scalar complex-valued function on [0,1] represented by its values at the
// grid nodes. Immutable; all operations return new instances.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(std::shared_ptr<const ChebGrid> grid, std::vector<Complex> values,
                 int smoothness_hint = kSmooth);

    template <class F>
    static GridFunction sample(std::shared_ptr<const ChebGrid> grid, F&& f,
                               int smoothness_hint = kSmooth) {
        std::vector<Complex> v(static_cast<size_t>(grid->size()));
        for (int j = 0; j < grid->size(); ++j) v[static_cast<size_t>(j)] = Complex(f(grid->node(j)));
        return GridFunction(std::move(grid), std::move(v), smoothness_hint);
    }

    static GridFunction constant(std::shared_ptr<const ChebGrid> grid, Complex c,
                                 int smoothness_hint = kSmooth);

    bool valid() const { return grid_ != nullptr; }
    const std::shared_ptr<const ChebGrid>& grid() const { return grid_; }
    const std::vector<Complex>& values() const { return values_; }
    int smoothness_hint() const { return smoothness_hint_; }
    GridFunction with_hint(int hint) const;

    // Barycentric evaluation; exact at nodes, domain error outside [0,1].
    Complex evaluate(double x) const;
    Complex operator()(double x) const { return evaluate(x); }

    // Spectral derivative; consumes one unit of the smoothness budget.
    GridFunction derivative() const;

    // F(x) = int_0^x f (base 0) or int_x^1 f (base 1); F(base) = 0.
    GridFunction integrate_from(int base) const;

    // int_0^1 f(t) dt by the grid quadrature rule.
    Complex definite_integral() const;

    // Resample onto another grid via interpolation.
    GridFunction resample(std::shared_ptr<const ChebGrid> grid) const;

    // Pointwise lifts.
    GridFunction map(Complex (*f)(const Complex&)) const;
    GridFunction abs() const;
    double max_abs() const;

    friend GridFunction operator+(const GridFunction& f, const GridFunction& g);
    friend GridFunction operator-(const GridFunction& f, const GridFunction& g);
    friend GridFunction operator*(const GridFunction& f, const GridFunction& g);
    friend GridFunction operator/(const GridFunction& f, const GridFunction& g);
    friend GridFunction operator*(Complex c, const GridFunction& f);
    friend GridFunction operator-(const GridFunction& f);

private:
    std::shared_ptr<const ChebGrid> grid_;
    std::vector<Complex> values_;
    int smoothness_hint_ = 0;
};

// Pointwise exponential, preserving the smoothness budget.
GridFunction exp(const GridFunction& f);

// Checks both operands share one grid; returns it.
const std::shared_ptr<const ChebGrid>& common_grid(const GridFunction& f, const GridFunction& g);

}  // namespace odeasym

#endif
