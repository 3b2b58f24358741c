#pragma once

// Quadrature substrate: uniform cell-centered grid on [0, L], boundary strips,
// L^p norms, trapezoidal time integration and finite-difference gradients.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace vll {

using Field = std::vector<double>;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Grid {
    double length = 1.0;
    std::size_t cells = 0;
    double dx = 0.0;
    Field x;    // cell centers (i + 1/2) dx
    Field dist; // distance to the nearer endpoint

    std::size_t size() const noexcept { return cells; }
};

/// Throws invalid_configuration for L <= 0 or N < 4.
Grid make_grid(double length, std::size_t cells);

class CellMask {
public:
    CellMask() = default;
    explicit CellMask(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool value) noexcept { bits_[i] = value ? 1 : 0; }
    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t count() const noexcept;
    /// True when every selected cell of *this is also selected in `other`.
    bool subset_of(const CellMask& other) const noexcept;

private:
    std::vector<unsigned char> bits_;
};

/// Cells with d(x_i) <= width. Throws invalid_argument for width < 0.
CellMask boundary_strip(const Grid& grid, double width);

/// Midpoint-rule integral of f over the (optionally masked) cells.
double integrate(const Grid& grid, std::span<const double> f, const CellMask* mask = nullptr);

/// Midpoint-rule L^p norm; p = infinity gives the masked max of |f|.
/// Throws invalid_argument for p < 1.
double lp_norm(const Grid& grid, std::span<const double> f, double p,
               const CellMask* mask = nullptr);

/// Pointwise Euclidean magnitude of a vector field given component-wise,
/// then lp_norm of the magnitude.
double lp_norm(const Grid& grid, std::span<const Field> components, double p,
               const CellMask* mask = nullptr);

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> value;

    void push(double time, double v) {
        t.push_back(time);
        value.push_back(v);
    }
    std::size_t size() const noexcept { return t.size(); }
};

/// Trapezoidal rule. Throws insufficient_data for fewer than 2 samples and
/// invalid_argument when times are not strictly increasing.
double time_integral(const TimeSeries& s);
double time_integral(std::span<const double> t, std::span<const double> v);

/// Running trapezoidal integral, out[0] = 0, out[k] = integral over [t0, tk].
std::vector<double> cumulative_time_integral(std::span<const double> t,
                                             std::span<const double> v);

/// Second-order centered differences in the interior and second-order one-sided
/// differences at the two boundary cells. Needs at least 3 samples.
Field gradient(std::span<const double> f, double dx);
inline Field gradient(const Grid& grid, std::span<const double> f) { return gradient(f, grid.dx); }

/// Second-order three-point second difference in the interior, second-order
/// four-point one-sided stencils at the boundary cells. Needs at least 4 samples.
Field second_derivative(std::span<const double> f, double dx);
inline Field second_derivative(const Grid& grid, std::span<const double> f) {
    return second_derivative(f, grid.dx);
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace vll
