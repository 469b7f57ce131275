#pragma once

#include <vector>

#include "gem/grid.hpp"

namespace gem {

/**
 * Time schedule of the Stark gradient eta(t), in rad/us/mm.
 *
 * Before `switch_time` the slope is +eta0, afterwards -eta0. With
 * `ramp_tau == 0` the reversal is a step; otherwise it follows
 * eta0 * tanh((switch_time - t) / ramp_tau). Inside any freeze interval
 * the slope is zero. For t > switch_time the detuning additionally carries
 * a constant readout offset: detuning(z, t) = eta(t) z - delta_offset.
 */
struct StarkProfile
{
    double eta0 = 0.0;
    double switch_time = 0.0;
    double ramp_tau = 0.0;
    double delta_offset = 0.0;
    std::vector<Interval> freeze_intervals;

    double eval(double t) const;
    double detuning(double z, double t) const;

    /// Integral of eval() from 0 to t, in closed form.
    double slope_integral(double t) const;

    /// Integral of the readout offset from 0 to t.
    double offset_integral(double t) const;

    double max_abs_slope() const;

    void validate(const char* path = "stark") const;

private:
    double base(double t) const;
    double base_integral(double t) const;
};

} // namespace gem
