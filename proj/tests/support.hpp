#pragma once

#include <cmath>
#include <numbers>

#include "gem/config.hpp"
#include "gem/pulse.hpp"

namespace gem::test {

inline constexpr double bandwidth_mhz = 8.0;
inline const double eta0 = 2.0 * std::numbers::pi * bandwidth_mhz / 6.0;

/// Half-length medium run: 100 us window, switch at 40 us.
inline Grid small_grid()
{
    return Grid{-3.0, 3.0, 1700, 100.0, 4001};
}

inline GemConfig small_config(double beta, double switch_time = 40.0,
                              double ramp_tau = 0.0)
{
    return make_gem_config(small_grid(), bandwidth_mhz, beta, switch_time,
                           ramp_tau);
}

/// Preset-resolution grid of the fig2 presets.
inline GemConfig fig2_config(double ramp_tau)
{
    return make_gem_config(Grid{}, bandwidth_mhz, 3.3, 80.0, ramp_tau);
}

inline double max_abs_diff(std::span<const complex> a,
                           std::span<const complex> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(std::span<const complex> a)
{
    double m = 0.0;
    for (const auto& v : a)
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace gem::test
