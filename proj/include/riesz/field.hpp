#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/grid.hpp"

namespace riesz {

using complex = std::complex<double>;

/// Real scalar field sampled on a SpectralGrid.
class Field {
public:
    Field() = default;
    explicit Field(const SpectralGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
    Field(const SpectralGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        require(values_.size() == grid_.size(), "field: value count does not match grid");
    }

    /// Samples f(x) (d = 1) or f(x, y) (d = 2) at the grid points.
    template <class F>
    static Field sample(const SpectralGrid& grid, F&& f) {
        Field out(grid);
        if constexpr (std::is_invocable_v<F, double>) {
            require(grid.dim() == 1, "Field::sample: one-argument function on a 2-D grid");
            for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.coordinate(i, 0));
        } else {
            require(grid.dim() == 2, "Field::sample: two-argument function on a 1-D grid");
            for (std::size_t i = 0; i < grid.size(); ++i)
                out.values_[i] = f(grid.coordinate(i, 0), grid.coordinate(i, 1));
        }
        return out;
    }

    const SpectralGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double mean() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s / static_cast<double>(values_.size());
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double min() const { return *std::min_element(values_.begin(), values_.end()); }

    bool finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    /// Mean is zero up to round-off relative to the field's magnitude.
    bool mean_zero() const {
        const double scale = std::max(max_abs(), std::numeric_limits<double>::min());
        return std::abs(mean()) <= 1e-11 * scale;
    }

    Field& operator+=(const Field& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    Field& operator*=(double c) {
        for (double& v : values_) v *= c;
        return *this;
    }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double c, Field a) { return a *= c; }

    /// Pointwise product.
    friend Field operator*(const Field& a, const Field& b) {
        a.check_same(b);
        Field out(a.grid_);
        for (std::size_t i = 0; i < a.values_.size(); ++i) out.values_[i] = a.values_[i] * b.values_[i];
        return out;
    }

private:
    void check_same(const Field& o) const {
        require(grid_ == o.grid_, "field arithmetic on mismatched grids");
    }

    SpectralGrid grid_;
    std::vector<double> values_;
};

/// d components of a vector field.
using VectorField = std::vector<Field>;

inline VectorField zero_vector_field(const SpectralGrid& grid) {
    return VectorField(static_cast<std::size_t>(grid.dim()), Field(grid));
}

/// Discrete L^p norm with uniform cell-volume quadrature; p = inf gives the max.
inline double lp_norm(std::span<const double> v, double cell_volume, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double s = 0.0;
    if (p == 2.0) {
        for (double x : v) s += x * x;
        return std::sqrt(s * cell_volume);
    }
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s * cell_volume, 1.0 / p);
}

inline double lp_norm(const Field& f, double p) { return lp_norm(f.values(), f.grid().cell_volume(), p); }

/// L^p norm of the pointwise Euclidean magnitude |u|(x).
inline double lp_norm(const VectorField& u, double p) {
    require(!u.empty(), "lp_norm: empty vector field");
    if (u.size() == 1) return lp_norm(u[0], p);
    std::vector<double> mag(u[0].size(), 0.0);
    for (const Field& c : u)
        for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
    for (double& m : mag) m = std::sqrt(m);
    return lp_norm(mag, u[0].grid().cell_volume(), p);
}

inline double l2_norm(const Field& f) { return lp_norm(f, 2.0); }
inline double l2_norm(const VectorField& u) { return lp_norm(u, 2.0); }

/// Physical parameters of the damped Euler-Riesz system.
///
/// s* = (alpha - d + 2)/2 must lie in (0, 1). The coefficients lambda (drag),
/// kappa (interaction strength) and rho_bar (background density) default to
/// the normalized values 1.
struct RieszParams {
    int dim = 1;
    double alpha = 0.0;
    double lambda = 1.0;
    double kappa = 1.0;
    double rho_bar = 1.0;

    double s_star() const { return (alpha - dim + 2.0) / 2.0; }
    /// Coefficient of the Riesz force in the linearized velocity equation.
    double coupling() const { return kappa * rho_bar; }

    void validate() const {
        require(dim >= 1, "params: dimension must be >= 1");
        const double s = s_star();
        if (!(s > 0.0 && s < 1.0)) {
            std::ostringstream os;
            os << "params: need d-2 < alpha < d (0 < s* < 1), got alpha=" << alpha << " d=" << dim;
            throw Error(os.str());
        }
        require(lambda > 0.0 && kappa > 0.0 && rho_bar > 0.0, "params: lambda, kappa, rho_bar must be positive");
    }

    static RieszParams from_s_star(int dim, double s_star) {
        RieszParams p;
        p.dim = dim;
        p.alpha = 2.0 * s_star + dim - 2.0;
        p.validate();
        return p;
    }
};

/// Density fluctuation a = rho - 1 and velocity u at time t.
struct FieldState {
    double t = 0.0;
    Field a;
    VectorField u;

    static FieldState zero(const SpectralGrid& grid, double t = 0.0) {
        return FieldState{t, Field(grid), zero_vector_field(grid)};
    }

    const SpectralGrid& grid() const { return a.grid(); }

    bool finite() const {
        if (!a.finite()) return false;
        return std::all_of(u.begin(), u.end(), [](const Field& c) { return c.finite(); });
    }

    void validate() const {
        require(u.size() == static_cast<std::size_t>(a.grid().dim()), "state: velocity needs d components");
        for (const Field& c : u) require(c.grid() == a.grid(), "state: component grids differ");
    }
};

}  // namespace riesz
