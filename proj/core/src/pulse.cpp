#include "gem/pulse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem {

complex PulseSpec::evaluate(double t) const
{
    switch (kind) {
    case PulseKind::gaussian: {
        const double x = (t - center) / width;
        return amplitude * std::exp(-x * x);
    }
    case PulseKind::modulated: {
        const double x = (t - center) / width;
        return amplitude * std::exp(-x * x) *
               (1.0 + mod_depth * std::cos(mod_freq * t));
    }
    case PulseKind::plane_wave_window: {
        if (t < window.begin || t > window.end)
            return 0.0;
        const double T = window.length();
        return amplitude * std::polar(1.0 / std::sqrt(T),
                                      mode_frequency() * t);
    }
    }
    return 0.0;
}

PulseSpec PulseSpec::scaled(complex c) const
{
    PulseSpec p = *this;
    p.amplitude *= c;
    return p;
}

double PulseSpec::mode_frequency() const
{
    if (kind != PulseKind::plane_wave_window)
        return 0.0;
    return 2.0 * std::numbers::pi * static_cast<double>(mode_index) /
           window.length();
}

std::vector<complex> PulseSpec::sample(const Grid& grid) const
{
    std::vector<complex> out(grid.nt);
    for (std::size_t i = 0; i < grid.nt; ++i)
        out[i] = evaluate(grid.t(i));
    return out;
}

void PulseSpec::validate(const char* path) const
{
    const std::string p(path);
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()) ||
        amplitude == complex(0.0))
        throw config_error(p + ".amplitude", "must be finite and non-zero");
    switch (kind) {
    case PulseKind::modulated:
        if (!std::isfinite(mod_freq))
            throw config_error(p + ".mod_freq", "must be finite");
        if (!std::isfinite(mod_depth) || mod_depth < 0.0)
            throw config_error(p + ".mod_depth", "must be >= 0");
        [[fallthrough]];
    case PulseKind::gaussian:
        if (!std::isfinite(center))
            throw config_error(p + ".center", "must be finite");
        if (!std::isfinite(width) || !(width > 0.0))
            throw config_error(p + ".width", "width > 0 required");
        break;
    case PulseKind::plane_wave_window:
        if (!std::isfinite(window.begin) || !std::isfinite(window.end) ||
            !(window.end > window.begin))
            throw config_error(p + ".window", "t2 > t1 required");
        break;
    }
}

PulseSpec make_plane_wave_mode(long n, double t1, double t2)
{
    PulseSpec p;
    p.kind = PulseKind::plane_wave_window;
    p.mode_index = n;
    p.window = {t1, t2};
    p.validate("mode");
    return p;
}

PulseSpec make_plane_wave_mode(double n, double t1, double t2)
{
    if (!std::isfinite(n) || std::trunc(n) != n)
        throw config_error("mode.mode_index", "mode index must be an integer");
    return make_plane_wave_mode(static_cast<long>(n), t1, t2);
}

PulseSpec make_gaussian(double center, double width, complex amplitude)
{
    PulseSpec p;
    p.kind = PulseKind::gaussian;
    p.center = center;
    p.width = width;
    p.amplitude = amplitude;
    p.validate("pulse");
    return p;
}

long count_modes(double T_us, double bandwidth_mhz)
{
    if (!(T_us > 0.0))
        throw config_error("T", "window length must be positive");
    if (!(bandwidth_mhz > 0.0))
        throw config_error("bandwidth", "bandwidth must be positive");
    // The slack keeps exact products such as 10 * 8 from rounding down.
    return static_cast<long>(std::floor(T_us * bandwidth_mhz * (1.0 + 1e-12)));
}

std::vector<long> in_band_modes(double T_us, double bandwidth_mhz)
{
    const long n = count_modes(T_us, bandwidth_mhz);
    std::vector<long> modes;
    modes.reserve(static_cast<std::size_t>(n));
    const long first = -(n / 2);
    for (long i = 0; i < n; ++i)
        modes.push_back(first + i);
    return modes;
}

} // namespace gem
