#pragma once

#include <span>
#include <vector>

#include "gem/config.hpp"
#include "gem/field.hpp"
#include "gem/pulse.hpp"

namespace gem {

/// What to keep from a run besides the boundary series.
struct RecordOptions
{
    /// Store every history_stride-th time row of E and alpha (0: none).
    std::size_t history_stride = 0;
    /// Rows always stored, nearest grid time to each entry.
    std::vector<double> snapshot_times;
};

/**
 * Space-time history of one run.
 *
 * `input_series` and `output_series` hold E at z_min and z_max for every
 * time step. `excitation` holds the integral of |alpha|^2 over z for every
 * time step. `e_field` and `polarisation` hold the rows listed in
 * `row_index` only.
 */
struct FieldRecord
{
    GemConfig config;
    std::vector<complex> input_series;
    std::vector<complex> output_series;
    std::vector<double> excitation;
    std::vector<std::size_t> row_index;
    ComplexMatrix e_field;
    ComplexMatrix polarisation;

    const Grid& grid() const { return config.grid; }

    /// Position of time index `t_index` among the stored rows, or -1.
    long find_row(std::size_t t_index) const;
};

/**
 * Integrates
 *
 *   d alpha / dt = -(gamma/2 + i detuning(z, t)) alpha + i g E
 *   d E / dz     = i N alpha,           E(z_min, t) = pulse(t)
 *
 * in the co-moving frame. Per step the detuning phase is applied exactly in
 * an interaction picture, the source term uses exponential weights for a
 * field linear in t over the step, and the coupled implicit update is
 * solved exactly by one trapezoidal sweep in z.
 */
FieldRecord run_gem(const GemConfig& config, const PulseSpec& pulse,
                    const RecordOptions& options = {});

/// Same as run_gem for several pulses sharing one configuration. The
/// per-step coefficients are computed once for the whole batch; each
/// record is identical to the corresponding single run.
std::vector<FieldRecord> run_gem_batch(const GemConfig& config,
                                       std::span<const PulseSpec> pulses,
                                       const RecordOptions& options = {});

/// Batch over pre-sampled input series (each of length grid.nt).
std::vector<FieldRecord>
run_gem_series(const GemConfig& config,
               std::span<const std::vector<complex>> inputs,
               const RecordOptions& options = {});

/// Trapezoidal energy of output_series over `window`.
double output_energy(const FieldRecord& record, Interval window);

/// Trapezoidal energy of input_series over `window`.
double input_energy(const FieldRecord& record, Interval window);

/// Weights of the exponential trapezoid rule: for rate x = lambda * dt,
/// integral over one step of exp(-lambda (t_{n+1} - s)) E(s) ds with E
/// linear is dt * (first * E_n + second * E_{n+1}).
struct StepWeights
{
    complex decay;  // exp(-x)
    complex first;  // weight of E_n / dt
    complex second; // weight of E_{n+1} / dt
};
StepWeights exponential_step_weights(complex x);

/// Same, with exp(-x) supplied by the caller.
StepWeights exponential_step_weights(complex x, complex decay);

} // namespace gem
