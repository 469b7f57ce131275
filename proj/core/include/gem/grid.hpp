#pragma once

#include <cstddef>

namespace gem {

/// Closed time or space interval [begin, end].
struct Interval
{
    double begin = 0.0;
    double end = 0.0;

    double length() const { return end - begin; }
    bool contains(double x) const { return x >= begin && x <= end; }
};

/// Uniform space-time grid. z in mm, t in microseconds, t starts at 0.
struct Grid
{
    double z_min = -3.0;
    double z_max = 3.0;
    std::size_t nz = 4096;
    double t_max = 200.0;
    std::size_t nt = 8001;

    double length() const { return z_max - z_min; }
    double dz() const { return length() / static_cast<double>(nz - 1); }
    double dt() const { return t_max / static_cast<double>(nt - 1); }
    double z(std::size_t j) const
    {
        return z_min + static_cast<double>(j) * dz();
    }
    double t(std::size_t i) const { return static_cast<double>(i) * dt(); }

    /// Nearest time index, clamped to the grid.
    std::size_t time_index(double t) const;

    /// Smallest nz that resolves a phase gradient of max_slope * t_max
    /// across the medium.
    std::size_t required_nz(double max_slope) const;

    /// Checks the basic shape invariants. Throws config_error.
    void validate(const char* path = "grid") const;

    /// Checks nz against the polarisation phase-gradient Nyquist limit.
    void validate_nyquist(double max_slope, const char* path = "grid") const;
};

} // namespace gem
