#include "gem/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem {

std::size_t Grid::time_index(double t) const
{
    if (t <= 0.0)
        return 0;
    const auto i = static_cast<std::size_t>(std::llround(t / dt()));
    return i < nt ? i : nt - 1;
}

std::size_t Grid::required_nz(double max_slope) const
{
    const double cycles = std::abs(max_slope) * length() * t_max /
                          std::numbers::pi;
    return static_cast<std::size_t>(std::ceil(cycles)) + 2;
}

void Grid::validate(const char* path) const
{
    const std::string p(path);
    if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_min < z_max))
        throw config_error(p + ".z_max", "z_min < z_max required");
    if (nz < 2)
        throw config_error(p + ".nz", "nz >= 2 required");
    if (nt < 2)
        throw config_error(p + ".nt", "nt >= 2 required");
    if (!std::isfinite(t_max) || !(t_max > 0.0))
        throw config_error(p + ".t_max", "t_max > 0 required");
    if (!(dz() > 0.0) || !(dt() > 0.0))
        throw config_error(p, "grid spacing must be positive");
}

void Grid::validate_nyquist(double max_slope, const char* path) const
{
    const std::size_t need = required_nz(max_slope);
    if (nz < need) {
        throw config_error(
            std::string(path) + ".nz",
            "Nyquist guard violated: nz >= ceil(eta_max * L * t_max / pi) + 2"
            " requires nz >= " + std::to_string(need) + ", got " +
                std::to_string(nz));
    }
}

} // namespace gem
