#pragma once

#include <complex>
#include <vector>

#include "gem/grid.hpp"

namespace gem {

using complex = std::complex<double>;

enum class PulseKind
{
    gaussian,
    modulated,
    plane_wave_window
};

/**
 * Input field envelope at the medium entrance.
 *
 *  - gaussian:   amplitude * exp(-((t - center) / width)^2), i.e. `width` is
 *                the 1/e half-width of the amplitude.
 *  - modulated:  the gaussian times (1 + mod_depth * cos(mod_freq * t)).
 *  - plane_wave_window: amplitude * exp(i w_n t) / sqrt(T) on
 *                [window.begin, window.end], zero outside, w_n = 2 pi n / T.
 */
struct PulseSpec
{
    PulseKind kind = PulseKind::gaussian;
    complex amplitude{1.0, 0.0};
    double center = 0.0;
    double width = 1.0;
    double mod_freq = 0.0;
    double mod_depth = 0.8;
    long mode_index = 0;
    Interval window{};

    complex evaluate(double t) const;

    /// Copy with the amplitude multiplied by c.
    PulseSpec scaled(complex c) const;

    /// Angular frequency of a plane-wave mode (0 for other kinds).
    double mode_frequency() const;

    /// Samples evaluate() on the time grid.
    std::vector<complex> sample(const Grid& grid) const;

    void validate(const char* path = "pulse") const;
};

/// Plane-wave basis function n on [t1, t2]; rejects t2 <= t1.
PulseSpec make_plane_wave_mode(long n, double t1, double t2);

/// Overload rejecting non-integral mode numbers.
PulseSpec make_plane_wave_mode(double n, double t1, double t2);

/// Gaussian with the given peak amplitude, center and 1/e half-width.
PulseSpec make_gaussian(double center, double width, complex amplitude = 1.0);

/// Number of plane-wave modes of a window of length T_us that fit into
/// a bandwidth of bandwidth_mhz (cycles per microsecond).
long count_modes(double T_us, double bandwidth_mhz);

/// Mode numbers of the count_modes(T, bandwidth) modes centred on zero
/// frequency: n in [-N/2, N/2 - 1] for even N, [-(N-1)/2, (N-1)/2] for odd.
std::vector<long> in_band_modes(double T_us, double bandwidth_mhz);

} // namespace gem
