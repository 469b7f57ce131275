#include "gem/field.hpp"

#include <cmath>
#include <stdexcept>

namespace gem {

void ComplexMatrix::append_row(std::span<const complex> values)
{
    if (m_rows == 0 && m_cols == 0)
        m_cols = values.size();
    if (values.size() != m_cols)
        throw std::invalid_argument("append_row: width mismatch");
    m_data.insert(m_data.end(), values.begin(), values.end());
    ++m_rows;
}

double trapezoid_energy(std::span<const complex> f, double h, std::size_t first,
                        std::size_t last)
{
    if (f.empty() || last <= first)
        return 0.0;
    double sum = 0.5 * (std::norm(f[first]) + std::norm(f[last]));
    for (std::size_t i = first + 1; i < last; ++i)
        sum += std::norm(f[i]);
    return sum * h;
}

double trapezoid_energy(std::span<const complex> f, double h)
{
    return f.empty() ? 0.0 : trapezoid_energy(f, h, 0, f.size() - 1);
}

std::pair<std::size_t, std::size_t> window_indices(const Grid& grid,
                                                   Interval window)
{
    if (!(window.end > window.begin))
        throw std::invalid_argument("empty time window");
    const double dt = grid.dt();
    const double lo = std::max(window.begin, 0.0);
    const double hi = std::min(window.end, grid.t_max);
    if (hi < lo)
        throw std::invalid_argument("time window outside the grid");
    // Small slack so that windows placed on grid points include them.
    const auto first = static_cast<std::size_t>(std::ceil(lo / dt - 1e-9));
    const auto last = static_cast<std::size_t>(std::floor(hi / dt + 1e-9));
    if (last < first || last >= grid.nt)
        throw std::invalid_argument("time window contains no samples");
    return {first, last};
}

} // namespace gem
