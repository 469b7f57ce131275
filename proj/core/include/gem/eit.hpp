#pragma once

#include <vector>

#include "gem/field.hpp"
#include "gem/pulse.hpp"
#include "gem/solver.hpp"

namespace gem {

/**
 * Three-level Lambda medium with a switched control field.
 *
 * Rates are in units of gamma_e per `time_unit_us`; the grid time axis is
 * in microseconds and a rate r acts as r / time_unit_us. The control Rabi
 * frequency is
 *
 *   Omega(t) = omega_c0 * (1 + (tanh((t - switch_up) / ramp_tau)
 *                              - tanh((t - switch_down) / ramp_tau)) / 2),
 *
 * on from the start, off between the two switch times, on again after.
 */
struct EitConfig
{
    double n_atoms = 5000.0;
    double g = 1.0;
    double omega_c0 = 50.0;
    double switch_down = 14.0;
    double switch_up = 75.0;
    double ramp_tau = 2.0;
    double gamma_e = 1.0;
    double time_unit_us = 1.0;
    Grid grid{0.0, 10.0, 1001, 150.0, 15001};

    /// Control Rabi frequency at t (same units as omega_c0).
    double control(double t) const;

    /// Group delay per unit length, g^2 N / Omega^2, in microseconds.
    double group_delay(double omega) const;

    void validate(const char* path = "config") const;
};

/// History of one EIT run. `spin_wave` holds S on the same rows as
/// `e_field` and `polarisation`; `control` holds Omega at every time step.
struct EitRecord
{
    EitConfig config;
    std::vector<complex> input_series;
    std::vector<complex> output_series;
    std::vector<double> control;
    std::vector<std::size_t> row_index;
    ComplexMatrix e_field;
    ComplexMatrix polarisation;
    ComplexMatrix spin_wave;

    const Grid& grid() const { return config.grid; }
    std::size_t row(std::size_t t_index) const;
};

/**
 * Integrates
 *
 *   dE/dz = i g N P,                      E(z_min, t) = pulse(t)
 *   dP/dt = -gamma_e P + i g E + i Omega(t) S
 *   dS/dt = i Omega(t) P
 *
 * with the (P, S) pair advanced by the exact propagator of the step
 * (Omega at the midpoint, E linear in t) and the same implicit trapezoidal
 * z-sweep as run_gem.
 */
EitRecord run_eit(const EitConfig& config, const PulseSpec& pulse,
                  const RecordOptions& options = {});

/// Dark-state polariton cos(theta) E - sin(theta) sqrt(N) S on the stored
/// rows, tan(theta) = g sqrt(N) / Omega. `omega` holds Omega per time
/// index (use record.control).
ComplexMatrix eit_polariton(const EitRecord& record,
                            std::span<const double> omega);

double output_energy(const EitRecord& record, Interval window);
double input_energy(const EitRecord& record, Interval window);

/**
 * Best Pearson correlation between a stored spatial profile |row(z)| and
 * the input envelope |E_in| mapped to space at the group velocity of
 * omega_c0, maximised over the time offset of the mapping. Later input
 * times map to smaller z.
 */
double stored_profile_correlation(const EitRecord& record,
                                  std::span<const complex> row);

} // namespace gem
