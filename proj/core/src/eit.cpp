#include "gem/eit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "gem/errors.hpp"
#include "gem/metrics.hpp"

namespace gem {

namespace {

constexpr complex I{0.0, 1.0};

// Propagator of one step for (P, S) with Omega frozen at the midpoint and
// the source i g E(t) linear over the step:
//   (P, S)(dt) = phi * (P, S)(0) + src_old * E_n + src_new * E_{n+1}.
struct EitStep
{
    Eigen::Matrix2cd phi;
    Eigen::Vector2cd src_old;
    Eigen::Vector2cd src_new;
};

EitStep eit_step(double gamma, double omega, double g, double dt)
{
    // Augmented state (P, S, s/dt, 1): the last two components generate
    // the linear and constant parts of the source.
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    a(0, 0) = -gamma;
    a(0, 1) = I * omega;
    a(1, 0) = I * omega;
    a(0, 2) = 1.0;
    a(0, 3) = 1.0;
    a(2, 3) = 1.0 / dt;
    const Eigen::Matrix4cd e = (a * dt).exp();

    EitStep s;
    s.phi = e.topLeftCorner<2, 2>();
    // Column 2 integrates the constant source, column 3 constant + ramp.
    const Eigen::Vector2cd constant = e.block<2, 1>(0, 2);
    const Eigen::Vector2cd ramp = e.block<2, 1>(0, 3) - constant;
    s.src_old = I * g * (constant - ramp);
    s.src_new = I * g * ramp;
    return s;
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

} // namespace

double EitConfig::control(double t) const
{
    if (ramp_tau == 0.0)
        return (t > switch_down && t < switch_up) ? 0.0 : omega_c0;
    return omega_c0 * (1.0 + 0.5 * (std::tanh((t - switch_up) / ramp_tau) -
                                    std::tanh((t - switch_down) / ramp_tau)));
}

double EitConfig::group_delay(double omega) const
{
    if (!(omega > 0.0))
        return std::numeric_limits<double>::infinity();
    return g * g * n_atoms / (omega * omega) * time_unit_us;
}

void EitConfig::validate(const char* path) const
{
    const std::string p(path);
    grid.validate((p + ".grid").c_str());
    if (!(n_atoms > 0.0))
        throw config_error(p + ".n_atoms", "must be positive");
    if (!(g > 0.0))
        throw config_error(p + ".g", "must be positive");
    if (!(omega_c0 >= 0.0))
        throw config_error(p + ".omega_c0", "must be non-negative");
    if (!(ramp_tau >= 0.0))
        throw config_error(p + ".ramp_tau", "must be non-negative");
    if (!(gamma_e >= 0.0))
        throw config_error(p + ".gamma_e", "must be non-negative");
    if (!(time_unit_us > 0.0))
        throw config_error(p + ".time_unit_us", "must be positive");
    if (!(switch_down < switch_up))
        throw config_error(p + ".switch_down", "must precede switch_up");
}

std::size_t EitRecord::row(std::size_t t_index) const
{
    auto it = std::lower_bound(row_index.begin(), row_index.end(), t_index);
    if (it == row_index.end() || *it != t_index)
        throw std::out_of_range("time index " + std::to_string(t_index) +
                                " not stored in EIT record");
    return static_cast<std::size_t>(it - row_index.begin());
}

EitRecord run_eit(const EitConfig& config, const PulseSpec& pulse,
                  const RecordOptions& options)
{
    config.validate();
    pulse.validate();
    const Grid& grid = config.grid;
    const std::size_t nz = grid.nz;
    const std::size_t nt = grid.nt;
    const double dt = grid.dt();
    const double dz = grid.dz();
    const double rate = 1.0 / config.time_unit_us;

    EitRecord rec;
    rec.config = config;
    rec.input_series = pulse.sample(grid);
    rec.output_series.assign(nt, 0.0);
    rec.control.resize(nt);
    for (std::size_t i = 0; i < nt; ++i)
        rec.control[i] = config.control(grid.t(i));
    rec.row_index = stored_rows(grid, options);

    std::vector<complex> p(nz, 0.0);
    std::vector<complex> s(nz, 0.0);
    std::vector<complex> e(nz, rec.input_series[0]);
    rec.output_series[0] = rec.input_series[0];
    auto store = [&](std::size_t n) {
        if (!std::binary_search(rec.row_index.begin(), rec.row_index.end(), n))
            return;
        rec.e_field.append_row(e);
        rec.polarisation.append_row(p);
        rec.spin_wave.append_row(s);
    };
    store(0);

    const complex h = I * config.g * config.n_atoms * dz * 0.5;
    for (std::size_t n = 0; n + 1 < nt; ++n) {
        const double omega = config.control(grid.t(n) + 0.5 * dt);
        const auto step = eit_step(config.gamma_e * rate, omega * rate,
                                   config.g * rate, dt);
        const complex couple = step.src_new(0);
        const complex inv_den = 1.0 / (1.0 - h * couple);

        complex f_prev = rec.input_series[n + 1];
        complex p_prev;
        for (std::size_t j = 0; j < nz; ++j) {
            const complex b = step.phi(0, 0) * p[j] + step.phi(0, 1) * s[j] +
                              step.src_old(0) * e[j];
            const complex f =
                j == 0 ? f_prev : (f_prev + h * (p_prev + b)) * inv_den;
            const complex p_new = b + couple * f;
            s[j] = step.phi(1, 0) * p[j] + step.phi(1, 1) * s[j] +
                   step.src_old(1) * e[j] + step.src_new(1) * f;
            p[j] = p_new;
            e[j] = f;
            p_prev = p_new;
            f_prev = f;
        }
        rec.output_series[n + 1] = f_prev;
        if (!std::isfinite(f_prev.real()) || !std::isfinite(f_prev.imag()) ||
            !std::isfinite(std::norm(p_prev)))
            throw solver_error("non-finite field or polarisation", n + 1);
        store(n + 1);
    }
    return rec;
}

ComplexMatrix eit_polariton(const EitRecord& record,
                            std::span<const double> omega)
{
    if (omega.size() != record.grid().nt)
        throw std::invalid_argument("eit_polariton: one Omega per time step");
    const std::size_t rows = record.e_field.rows();
    const std::size_t nz = record.e_field.cols();
    if (record.spin_wave.rows() != rows || record.spin_wave.cols() != nz)
        throw std::invalid_argument("eit_polariton: shape mismatch");
    const double coupling =
        record.config.g * std::sqrt(record.config.n_atoms);
    const double sqrt_n = std::sqrt(record.config.n_atoms);
    ComplexMatrix out(rows, nz);
    for (std::size_t r = 0; r < rows; ++r) {
        const double w = omega[record.row_index[r]];
        const double norm = std::hypot(w, coupling);
        const double c = w / norm;
        const double s = coupling / norm;
        const auto e = record.e_field.row(r);
        const auto sw = record.spin_wave.row(r);
        auto dst = out.row(r);
        for (std::size_t j = 0; j < nz; ++j)
            dst[j] = c * e[j] - s * sqrt_n * sw[j];
    }
    return out;
}

double output_energy(const EitRecord& record, Interval window)
{
    const auto [first, last] = window_indices(record.grid(), window);
    return trapezoid_energy(record.output_series, record.grid().dt(), first,
                            last);
}

double input_energy(const EitRecord& record, Interval window)
{
    const auto [first, last] = window_indices(record.grid(), window);
    return trapezoid_energy(record.input_series, record.grid().dt(), first,
                            last);
}

double stored_profile_correlation(const EitRecord& record,
                                  std::span<const complex> row)
{
    const Grid& grid = record.grid();
    if (row.size() != grid.nz)
        throw std::invalid_argument("stored_profile_correlation: row size");
    const double delay = record.config.group_delay(record.config.omega_c0);
    if (!std::isfinite(delay))
        throw analysis_error("stored_profile_correlation: no group velocity");

    std::vector<double> profile(grid.nz);
    for (std::size_t j = 0; j < grid.nz; ++j)
        profile[j] = std::abs(row[j]);
    const double dt = grid.dt();
    auto envelope = [&](double t) {
        if (t < 0.0 || t > grid.t_max)
            return 0.0;
        const double pos = t / dt;
        const auto i = std::min(static_cast<std::size_t>(pos), grid.nt - 2);
        const double f = pos - static_cast<double>(i);
        return (1.0 - f) * std::abs(record.input_series[i]) +
               f * std::abs(record.input_series[i + 1]);
    };

    std::vector<double> mapped(grid.nz);
    double best = -1.0;
    for (std::size_t k = 0; k < grid.nt; ++k) {
        const double t_ref = grid.t(k);
        for (std::size_t j = 0; j < grid.nz; ++j)
            mapped[j] = envelope(t_ref - (grid.z(j) - grid.z_min) * delay);
        best = std::max(best, pearson_correlation(profile, mapped));
    }
    return best;
}

} // namespace gem
