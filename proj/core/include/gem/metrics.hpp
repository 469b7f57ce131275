#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gem/config.hpp"
#include "gem/solver.hpp"

namespace gem {

/// Storage figures of merit for one input.
struct FidelityReport
{
    double sigma = 0.0;    // echo energy / input energy
    double fidelity = 0.0; // |correlation with time-reversed output| / n_ph
    double shape = 0.0;    // fidelity / sqrt(sigma)
    double tau = 0.0;      // delay maximizing the correlation, us
    double delta = 0.0;    // readout offset in effect, rad/us
    double n_ph = 0.0;     // input norm, dt * sum |E_in|^2
};

/// (1 - exp(-2 pi beta))^2. Rejects beta < 0.
double efficiency_analytic(double beta);

/// Echo energy in `echo_window` over input energy in `input_window`.
double efficiency_numeric(const FieldRecord& record, Interval input_window,
                          Interval echo_window);

/**
 * Correlation of e_in(t) with the time-reversed output e_out(tau - t),
 * maximized over tau:
 *
 *   F = max_tau |dt * sum_i conj(e_out(tau - t_i)) e_in(t_i)| / n_ph.
 *
 * tau is scanned on the grid and refined by a parabola through the peak
 * and its neighbours. Both series start at t = 0 with spacing dt.
 */
FidelityReport fidelity(std::span<const complex> e_in,
                        std::span<const complex> e_out, double dt,
                        double sigma, double delta = 0.0);

/// Report for a run: sigma over the echo window [switch_time, t_max]
/// against the whole input, fidelity against the output restricted to the
/// same window.
FidelityReport storage_report(const FieldRecord& record);

/// Frequency offset d maximizing the fidelity of e_out * exp(i d t)
/// against e_in: a coarse scan over `bracket` at a quarter of the
/// input's spectral resolution, then golden-section refinement to
/// `tolerance`.
double estimate_output_shift(std::span<const complex> e_in,
                             std::span<const complex> e_out, double dt,
                             Interval bracket, double tolerance);

struct GoldenResult
{
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// Golden-section search for a maximum of a unimodal f on [a, b].
GoldenResult golden_section_maximize(const std::function<double(double)>& f,
                                     double a, double b, double tolerance);

struct SweepRow
{
    double beta = 0.0;
    long mode = 0;
    FidelityReport report;
};

struct SweepOptions
{
    std::size_t workers = 1;
    /// Modes integrated together per solver pass.
    std::size_t batch_size = 16;
    /// Readout offset per beta (same length as betas) or empty for zero.
    std::vector<double> delta;
};

/// One storage run per (beta, mode) on plane-wave modes of `interval`.
/// Rows come out ordered by beta, then by the order of `modes`; the result
/// does not depend on `workers` or `batch_size`.
std::vector<SweepRow> mode_fidelity_sweep(const GemConfig& config_template,
                                          Interval interval,
                                          std::span<const double> betas,
                                          std::span<const long> modes,
                                          const SweepOptions& options = {});

struct DeltaSearch
{
    double delta = 0.0;        // recommended readout offset
    double estimate = 0.0;     // post-hoc estimate seeding the search
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
    bool improved = false;     // false: no offset beat delta = 0
    int evaluations = 0;       // solver runs, baseline included
};

struct DeltaSearchOptions
{
    /// Golden-section tolerance relative to the refinement bracket.
    double relative_tolerance = 1e-3;
};

/**
 * Readout offset maximizing the fidelity of plane-wave mode `probe_mode`
 * on `interval`. The output of a delta = 0 run is first scanned for the
 * frequency shift over the full memory bandwidth; the solver is then
 * re-run inside one spectral resolution element (2 pi / T) around that
 * estimate, with golden-section search.
 */
DeltaSearch find_delta(const GemConfig& config_template, Interval interval,
                       long probe_mode, const DeltaSearchOptions& options = {});

/// Time of the largest |output| inside `window`, refined by a parabola
/// through the peak sample and its neighbours.
double echo_peak_time(const FieldRecord& record, Interval window);

/**
 * Largest mismatch of the excitation balance
 *
 *   (N / g) d/dt int |alpha|^2 dz = |E(z_min)|^2 - |E(z_max)|^2
 *
 * over the time steps, relative to the peak input flux. Each step compares
 * the difference quotient of the excitation with the flux of the step-mean
 * boundary fields. Holds for gamma = 0.
 */
double excitation_balance_error(const FieldRecord& record);

/// Pearson correlation coefficient; 0 when either series is constant.
double pearson_correlation(std::span<const double> a,
                           std::span<const double> b);

/// |sum_i e(t_i) exp(i w t_i) dt| at each angular frequency in `omegas`,
/// t_i = i dt.
std::vector<double> spectrum_magnitude(std::span<const complex> e, double dt,
                                       std::span<const double> omegas);

/// Pearson correlation between |alpha(z)| on stored row `row` and the
/// input's magnitude spectrum at the resonant frequencies slope * z.
double spectral_profile_correlation(const FieldRecord& record,
                                    std::size_t row, double slope);

} // namespace gem
