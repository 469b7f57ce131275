#include "gem/stark.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem {

namespace {

// log(cosh(x)) without overflow.
double log_cosh(double x)
{
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

} // namespace

double StarkProfile::base(double t) const
{
    if (ramp_tau > 0.0)
        return eta0 * std::tanh((switch_time - t) / ramp_tau);
    if (t < switch_time)
        return eta0;
    if (t > switch_time)
        return -eta0;
    return 0.0;
}

// Antiderivative of base() with base_integral(0) == 0.
double StarkProfile::base_integral(double t) const
{
    if (ramp_tau > 0.0) {
        return eta0 * ramp_tau *
               (log_cosh(switch_time / ramp_tau) -
                log_cosh((switch_time - t) / ramp_tau));
    }
    return eta0 * (switch_time - std::abs(switch_time - t));
}

double StarkProfile::eval(double t) const
{
    for (const auto& f : freeze_intervals) {
        if (f.contains(t))
            return 0.0;
    }
    return base(t);
}

double StarkProfile::detuning(double z, double t) const
{
    return eval(t) * z - (t > switch_time ? delta_offset : 0.0);
}

double StarkProfile::slope_integral(double t) const
{
    double total = base_integral(t);
    for (const auto& f : freeze_intervals) {
        if (t <= f.begin)
            continue;
        const double stop = std::min(t, f.end);
        total -= base_integral(stop) - base_integral(f.begin);
    }
    return total;
}

double StarkProfile::offset_integral(double t) const
{
    return t > switch_time ? delta_offset * (t - switch_time) : 0.0;
}

double StarkProfile::max_abs_slope() const { return std::abs(eta0); }

void StarkProfile::validate(const char* path) const
{
    const std::string p(path);
    if (!std::isfinite(eta0) || eta0 == 0.0)
        throw config_error(p + ".eta0", "eta0 must be finite and non-zero");
    if (!std::isfinite(switch_time))
        throw config_error(p + ".switch_time", "must be finite");
    if (!std::isfinite(ramp_tau) || ramp_tau < 0.0)
        throw config_error(p + ".ramp_tau", "ramp_tau >= 0 required");
    if (!std::isfinite(delta_offset))
        throw config_error(p + ".delta_offset", "must be finite");
    for (std::size_t i = 0; i < freeze_intervals.size(); ++i) {
        const auto& f = freeze_intervals[i];
        const std::string fp =
            p + ".freeze_intervals[" + std::to_string(i) + "]";
        if (!(f.begin < f.end))
            throw config_error(fp, "interval must satisfy t_a < t_b");
        if (i > 0 && f.begin < freeze_intervals[i - 1].end)
            throw config_error(fp, "intervals must be sorted and disjoint");
    }
}

} // namespace gem
