#include "gem/config.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem {

double GemConfig::optical_depth() const
{
    return g * linear_density / std::abs(stark.eta0);
}

double GemConfig::bandwidth() const
{
    return std::abs(stark.eta0) * grid.length();
}

void GemConfig::validate(const char* path, bool allow_uncoupled) const
{
    const std::string p(path);
    const bool uncoupled = allow_uncoupled && g == 0.0;
    if (!uncoupled && (!std::isfinite(g) || !(g > 0.0)))
        throw config_error(p + ".g", "g > 0 required");
    if (!std::isfinite(linear_density) || !(linear_density > 0.0))
        throw config_error(p + ".linear_density", "linear_density > 0 required");
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw config_error(p + ".gamma", "gamma >= 0 required");
    stark.validate((p + ".stark").c_str());
    grid.validate((p + ".grid").c_str());
    const double beta = optical_depth();
    if (!uncoupled && (!std::isfinite(beta) || !(beta > 0.0)))
        throw config_error(p, "optical depth must be finite and positive");
    grid.validate_nyquist(stark.max_abs_slope(), (p + ".grid").c_str());
}

GemConfig make_gem_config(const Grid& grid, double bandwidth_mhz, double beta,
                          double switch_time, double ramp_tau)
{
    GemConfig c;
    c.grid = grid;
    c.g = 1.0;
    c.stark.eta0 = 2.0 * std::numbers::pi * bandwidth_mhz / grid.length();
    c.stark.switch_time = switch_time;
    c.stark.ramp_tau = ramp_tau;
    c.linear_density = beta * c.stark.eta0 / c.g;
    return c;
}

GemConfig with_optical_depth(GemConfig config, double beta)
{
    config.linear_density = beta * std::abs(config.stark.eta0) / config.g;
    return config;
}

} // namespace gem
