#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gem/grid.hpp"

namespace gem {

using complex = std::complex<double>;

/// Dense row-major complex matrix; rows are time samples, columns space
/// (or k) samples.
class ComplexMatrix
{
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : m_rows(rows), m_cols(cols), m_data(rows * cols)
    {
    }

    std::size_t rows() const { return m_rows; }
    std::size_t cols() const { return m_cols; }
    bool empty() const { return m_data.empty(); }

    complex& operator()(std::size_t r, std::size_t c)
    {
        return m_data[r * m_cols + c];
    }
    const complex& operator()(std::size_t r, std::size_t c) const
    {
        return m_data[r * m_cols + c];
    }

    std::span<complex> row(std::size_t r)
    {
        return {m_data.data() + r * m_cols, m_cols};
    }
    std::span<const complex> row(std::size_t r) const
    {
        return {m_data.data() + r * m_cols, m_cols};
    }

    void append_row(std::span<const complex> values);

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<complex> m_data;
};

/// Trapezoidal integral of |f|^2 over samples [first, last] with spacing h.
double trapezoid_energy(std::span<const complex> f, double h, std::size_t first,
                        std::size_t last);

/// Trapezoidal integral of |f|^2 over all samples.
double trapezoid_energy(std::span<const complex> f, double h);

/// Sample indices of `grid` whose times lie inside `window`; throws
/// std::invalid_argument when none do or the window is reversed.
std::pair<std::size_t, std::size_t> window_indices(const Grid& grid,
                                                   Interval window);

} // namespace gem
