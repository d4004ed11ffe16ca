#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"

namespace pmelab {

using Field = std::vector<double>;

enum class GridLayout {
    CellCentered,   ///< r_i = (i + 1/2) h, i = 0..cells-1; used by the solver
    VertexCentered  ///< r_i = i h, i = 0..cells; has a node at the pole
};

/// Uniform radial grid on [0, r_max].
class RadialGrid {
public:
    RadialGrid(double r_max, std::size_t cells, GridLayout layout = GridLayout::CellCentered)
        : r_max_(r_max), cells_(cells), layout_(layout) {
        if (!(r_max > 0.0)) throw ConfigError("grid: r_max must be positive");
        if (cells < 3) throw ConfigError("grid: at least 3 cells required, got " + std::to_string(cells));
    }

    double r_max() const noexcept { return r_max_; }
    std::size_t cells() const noexcept { return cells_; }
    GridLayout layout() const noexcept { return layout_; }
    double h() const noexcept { return r_max_ / static_cast<double>(cells_); }

    std::size_t size() const noexcept {
        return layout_ == GridLayout::CellCentered ? cells_ : cells_ + 1;
    }

    double r(std::size_t i) const noexcept {
        const double offset = layout_ == GridLayout::CellCentered ? 0.5 : 0.0;
        return (static_cast<double>(i) + offset) * h();
    }

    Field nodes() const {
        Field out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(i);
        return out;
    }

    /// Same domain and layout with the cell count multiplied by `factor`.
    RadialGrid refined(std::size_t factor = 2) const { return {r_max_, cells_ * factor, layout_}; }

private:
    double r_max_;
    std::size_t cells_;
    GridLayout layout_;
};

template <class Fn>
Field sample(const RadialGrid& grid, Fn&& fn) {
    Field out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(grid.r(i));
    return out;
}

/// Centered first and second differences of a radial field.
///
/// The pole side is closed by even reflection (the field is radial, hence even
/// in r); the outer side by a quadratic-extrapolation ghost, which is only
/// first-order accurate at the last node.
struct RadialDerivatives {
    Field d1;
    Field d2;
};

inline RadialDerivatives radial_derivatives(const RadialGrid& grid, const Field& g) {
    const std::size_t n = grid.size();
    if (g.size() != n) throw ConfigError("field size does not match grid");
    const double h = grid.h();
    auto at = [&](std::ptrdiff_t i) -> double {
        if (i < 0) {
            // reflection about r = 0
            const std::ptrdiff_t j = grid.layout() == GridLayout::CellCentered ? -i - 1 : -i;
            return g[static_cast<std::size_t>(j)];
        }
        if (i >= static_cast<std::ptrdiff_t>(n)) return 3.0 * g[n - 1] - 3.0 * g[n - 2] + g[n - 3];
        return g[static_cast<std::size_t>(i)];
    };
    RadialDerivatives out{Field(n), Field(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const double gm = at(i - 1), g0 = at(i), gp = at(i + 1);
        out.d1[k] = (gp - gm) / (2.0 * h);
        out.d2[k] = (gp - 2.0 * g0 + gm) / (h * h);
    }
    return out;
}

} // namespace pmelab
