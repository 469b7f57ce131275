#pragma once

#include "gem/grid.hpp"
#include "gem/stark.hpp"

namespace gem {

/// Physical parameters of the two-level medium plus the numerical grid.
/// Only g * linear_density and eta enter the dynamics.
struct GemConfig
{
    double g = 1.0;
    double linear_density = 1.0;
    double gamma = 0.0;
    StarkProfile stark;
    Grid grid;

    /// g * linear_density / |eta0|.
    double optical_depth() const;

    /// Stark bandwidth |eta0| * L, rad/us.
    double bandwidth() const;

    /// Full check, including the Nyquist guard. Throws config_error.
    /// `allow_uncoupled` admits g == 0, the decoupled limit the solver
    /// accepts for diagnostics.
    void validate(const char* path = "config",
                  bool allow_uncoupled = false) const;
};

/// Medium with Stark bandwidth bandwidth_mhz (|eta0| L / 2 pi) and optical
/// depth beta, using g = 1.
GemConfig make_gem_config(const Grid& grid, double bandwidth_mhz, double beta,
                          double switch_time, double ramp_tau = 0.0);

/// Copy of `config` with linear_density rescaled to reach optical depth beta.
GemConfig with_optical_depth(GemConfig config, double beta);

} // namespace gem
