#include "gem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gem/errors.hpp"

namespace gem {

namespace {

constexpr complex I{0.0, 1.0};

// Plain reciprocal; avoids the library's inf/nan-aware complex division.
inline complex reciprocal(complex x)
{
    const double n = x.real() * x.real() + x.imag() * x.imag();
    return {x.real() / n, -x.imag() / n};
}

std::vector<std::size_t> stored_rows(const Grid& grid,
                                     const RecordOptions& options)
{
    std::vector<std::size_t> rows;
    if (options.history_stride > 0) {
        for (std::size_t i = 0; i < grid.nt; i += options.history_stride)
            rows.push_back(i);
    }
    for (double t : options.snapshot_times)
        rows.push_back(grid.time_index(t));
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

struct State
{
    std::vector<complex> alpha;
    std::vector<complex> field;
};

} // namespace

long FieldRecord::find_row(std::size_t t_index) const
{
    auto it = std::lower_bound(row_index.begin(), row_index.end(), t_index);
    if (it == row_index.end() || *it != t_index)
        return -1;
    return static_cast<long>(it - row_index.begin());
}

StepWeights exponential_step_weights(complex x)
{
    return exponential_step_weights(x, std::exp(-x));
}

StepWeights exponential_step_weights(complex x, complex decay)
{
    // I0 = int_0^1 exp(-x u) du, I1 = int_0^1 u exp(-x u) du.
    StepWeights w;
    w.decay = decay;
    complex i0;
    complex i1;
    if (std::abs(x) < 0.1) {
        // Taylor series; the closed forms cancel badly near x = 0.
        complex term = 1.0; // (-x)^k / k!
        for (int k = 0; k < 9; ++k) {
            i0 += term / static_cast<double>(k + 1);
            i1 += term / static_cast<double>(k + 2);
            term *= -x / static_cast<double>(k + 1);
        }
    } else {
        const complex inv_x = reciprocal(x);
        i0 = (1.0 - decay) * inv_x;
        i1 = (1.0 - decay * (1.0 + x)) * (inv_x * inv_x);
    }
    w.first = i1;
    w.second = i0 - i1;
    return w;
}

std::vector<FieldRecord>
run_gem_series(const GemConfig& config,
               std::span<const std::vector<complex>> inputs,
               const RecordOptions& options)
{
    config.validate("config", true);
    const Grid& grid = config.grid;
    const std::size_t nz = grid.nz;
    const std::size_t nt = grid.nt;
    const double dt = grid.dt();
    const double dz = grid.dz();
    const std::size_t batch = inputs.size();
    for (const auto& in : inputs) {
        if (in.size() != nt)
            throw std::invalid_argument("input series length must equal nt");
    }

    const auto rows = stored_rows(grid, options);
    std::vector<FieldRecord> records(batch);
    std::vector<State> states(batch);
    for (std::size_t p = 0; p < batch; ++p) {
        auto& rec = records[p];
        rec.config = config;
        rec.input_series = inputs[p];
        rec.output_series.assign(nt, 0.0);
        rec.excitation.assign(nt, 0.0);
        rec.row_index = rows;
        states[p].alpha.assign(nz, 0.0);
        states[p].field.assign(nz, inputs[p][0]);
        rec.output_series[0] = inputs[p][0];
    }

    auto store = [&](std::size_t n) {
        if (!std::binary_search(rows.begin(), rows.end(), n))
            return;
        for (std::size_t p = 0; p < batch; ++p) {
            records[p].e_field.append_row(states[p].field);
            records[p].polarisation.append_row(states[p].alpha);
        }
    };
    store(0);

    std::vector<complex> decay(nz);
    std::vector<complex> w_old(nz);
    std::vector<complex> couple(nz);
    std::vector<complex> inv_den(nz);
    const complex h = I * config.linear_density * dz * 0.5;
    const complex ig = I * config.g;
    const double half_gamma_dt = 0.5 * config.gamma * dt;

    double cached_slope = std::numeric_limits<double>::quiet_NaN();
    double cached_offset = cached_slope;
    for (std::size_t n = 0; n + 1 < nt; ++n) {
        const double t0 = grid.t(n);
        const double t1 = grid.t(n + 1);
        double slope_phase =
            config.stark.slope_integral(t1) - config.stark.slope_integral(t0);
        double offset_phase = config.stark.offset_integral(t1) -
                              config.stark.offset_integral(t0);
        // Piecewise-constant schedules give the same increments up to
        // rounding of t; snap to the previous step so the coefficients
        // can be reused.
        if (std::abs(slope_phase - cached_slope) <=
                1e-10 * std::abs(cached_slope) &&
            std::abs(offset_phase - cached_offset) <=
                1e-10 * std::abs(cached_offset) + 1e-300) {
            slope_phase = cached_slope;
            offset_phase = cached_offset;
        }
        if (slope_phase != cached_slope || offset_phase != cached_offset) {
            cached_slope = slope_phase;
            cached_offset = offset_phase;
            // The phase is linear in z, so exp(-x_j) follows by recurrence,
            // re-anchored periodically to bound rounding drift.
            const complex step_rot = std::polar(1.0, -dz * slope_phase);
            complex rot;
            for (std::size_t j = 0; j < nz; ++j) {
                const complex x(half_gamma_dt,
                                grid.z(j) * slope_phase - offset_phase);
                rot = (j % 256 == 0) ? std::exp(-x) : rot * step_rot;
                const auto w = exponential_step_weights(x, rot);
                decay[j] = w.decay;
                w_old[j] = ig * (dt * w.first);
                couple[j] = ig * (dt * w.second);
                inv_den[j] = reciprocal(1.0 - h * couple[j]);
            }
        }

        for (std::size_t p = 0; p < batch; ++p) {
            auto& alpha = states[p].alpha;
            auto& field = states[p].field;
            const complex e_in = inputs[p][n + 1];

            complex f_prev = e_in;
            complex a_prev = decay[0] * alpha[0] + w_old[0] * field[0] +
                             couple[0] * f_prev;
            double excitation = 0.5 * std::norm(a_prev);
            alpha[0] = a_prev;
            field[0] = f_prev;
            for (std::size_t j = 1; j < nz; ++j) {
                const complex b = decay[j] * alpha[j] + w_old[j] * field[j];
                const complex f = (f_prev + h * (a_prev + b)) * inv_den[j];
                const complex a = b + couple[j] * f;
                alpha[j] = a;
                field[j] = f;
                a_prev = a;
                f_prev = f;
                excitation += std::norm(a);
            }
            excitation -= 0.5 * std::norm(a_prev);

            auto& rec = records[p];
            rec.output_series[n + 1] = f_prev;
            rec.excitation[n + 1] = excitation * dz;
            if (!std::isfinite(excitation) || !std::isfinite(f_prev.real()) ||
                !std::isfinite(f_prev.imag()))
                throw solver_error("non-finite field or polarisation", n + 1);
        }
        store(n + 1);
    }
    return records;
}

std::vector<FieldRecord> run_gem_batch(const GemConfig& config,
                                       std::span<const PulseSpec> pulses,
                                       const RecordOptions& options)
{
    std::vector<std::vector<complex>> inputs;
    inputs.reserve(pulses.size());
    for (const auto& p : pulses) {
        p.validate();
        inputs.push_back(p.sample(config.grid));
    }
    return run_gem_series(config, inputs, options);
}

FieldRecord run_gem(const GemConfig& config, const PulseSpec& pulse,
                    const RecordOptions& options)
{
    auto records = run_gem_batch(config, std::span(&pulse, 1), options);
    return std::move(records.front());
}

double output_energy(const FieldRecord& record, Interval window)
{
    const auto [first, last] = window_indices(record.grid(), window);
    return trapezoid_energy(record.output_series, record.grid().dt(), first,
                            last);
}

double input_energy(const FieldRecord& record, Interval window)
{
    const auto [first, last] = window_indices(record.grid(), window);
    return trapezoid_energy(record.input_series, record.grid().dt(), first,
                            last);
}

} // namespace gem
