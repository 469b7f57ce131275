#include "gem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gem/errors.hpp"
#include "gem/fft.hpp"
#include "gem/parallel.hpp"
#include "gem/pulse.hpp"

namespace gem {

namespace {

// Duration over which |e|^2 exceeds 1e-6 of its peak.
double support_duration(std::span<const complex> e, double dt)
{
    double peak = 0.0;
    for (const auto& v : e)
        peak = std::max(peak, std::norm(v));
    std::size_t first = e.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::norm(e[i]) > 1e-6 * peak) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= e.size())
        return 0.0;
    return static_cast<double>(last - first + 1) * dt;
}

std::vector<complex> shifted(std::span<const complex> e, double dt, double d)
{
    std::vector<complex> out(e.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        out[i] = e[i] * std::polar(1.0, d * static_cast<double>(i) * dt);
    return out;
}

std::vector<complex> echo_part(const FieldRecord& record)
{
    const Grid& grid = record.grid();
    std::vector<complex> out = record.output_series;
    const double ts = record.config.stark.switch_time;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (grid.t(i) < ts)
            out[i] = 0.0;
    }
    return out;
}

} // namespace

double efficiency_analytic(double beta)
{
    if (!(beta >= 0.0))
        throw std::invalid_argument("efficiency_analytic: beta >= 0 required");
    const double s = -std::expm1(-2.0 * std::numbers::pi * beta);
    return s * s;
}

double efficiency_numeric(const FieldRecord& record, Interval input_window,
                          Interval echo_window)
{
    if (input_window.end > echo_window.begin &&
        echo_window.end > input_window.begin)
        throw std::invalid_argument("efficiency_numeric: windows overlap");
    const double in = input_energy(record, input_window);
    if (!(in > 0.0))
        throw analysis_error("efficiency_numeric: zero input energy");
    return output_energy(record, echo_window) / in;
}

FidelityReport fidelity(std::span<const complex> e_in,
                        std::span<const complex> e_out, double dt,
                        double sigma, double delta)
{
    if (e_in.size() != e_out.size())
        throw std::invalid_argument("fidelity: series on different grids");
    double norm = 0.0;
    for (const auto& v : e_in)
        norm += std::norm(v);
    norm *= dt;
    if (!(norm > 0.0))
        throw analysis_error("fidelity: zero input norm");

    const auto corr = correlate_reversed(e_out, e_in);
    std::size_t best = 0;
    double peak = 0.0;
    for (std::size_t m = 0; m < corr.size(); ++m) {
        const double v = std::abs(corr[m]);
        if (v > peak) {
            peak = v;
            best = m;
        }
    }
    if (!(peak > 0.0))
        throw analysis_error("fidelity: no overlap at any delay");

    double offset = 0.0;
    if (best > 0 && best + 1 < corr.size()) {
        const double ym = std::abs(corr[best - 1]);
        const double yp = std::abs(corr[best + 1]);
        const double curv = ym - 2.0 * peak + yp;
        if (curv < 0.0) {
            offset = 0.5 * (ym - yp) / curv;
            peak -= 0.25 * (ym - yp) * offset;
        }
    }

    FidelityReport r;
    r.n_ph = norm;
    r.sigma = sigma;
    r.delta = delta;
    r.tau = (static_cast<double>(best) + offset) * dt;
    r.fidelity = peak * dt / norm;
    r.shape = sigma > 0.0 ? r.fidelity / std::sqrt(sigma) : 0.0;
    return r;
}

FidelityReport storage_report(const FieldRecord& record)
{
    const Grid& grid = record.grid();
    const Interval echo{record.config.stark.switch_time, grid.t_max};
    const double in = trapezoid_energy(record.input_series, grid.dt());
    if (!(in > 0.0))
        throw analysis_error("storage_report: zero input energy");
    const double sigma = output_energy(record, echo) / in;
    return fidelity(record.input_series, echo_part(record), grid.dt(), sigma,
                    record.config.stark.delta_offset);
}

GoldenResult golden_section_maximize(const std::function<double(double)>& f,
                                     double a, double b, double tolerance)
{
    if (!(b > a))
        throw std::invalid_argument("golden_section_maximize: empty bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    GoldenResult r;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    r.evaluations = 2;
    while (b - a > tolerance) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++r.evaluations;
    }
    if (fc >= fd) {
        r.x = c;
        r.value = fc;
    } else {
        r.x = d;
        r.value = fd;
    }
    return r;
}

double estimate_output_shift(std::span<const complex> e_in,
                             std::span<const complex> e_out, double dt,
                             Interval bracket, double tolerance)
{
    if (!(bracket.end > bracket.begin))
        throw std::invalid_argument("estimate_output_shift: empty bracket");
    const double duration = support_duration(e_in, dt);
    if (!(duration > 0.0))
        throw analysis_error("estimate_output_shift: zero input");
    auto score = [&](double d) {
        const auto out = shifted(e_out, dt, d);
        return fidelity(e_in, out, dt, 1.0).fidelity;
    };
    const double step = 0.25 * 2.0 * std::numbers::pi / duration;
    const auto count =
        static_cast<std::size_t>(std::ceil(bracket.length() / step));
    double best_d = bracket.begin;
    double best = -1.0;
    for (std::size_t i = 0; i <= count; ++i) {
        const double d =
            std::min(bracket.end, bracket.begin + static_cast<double>(i) * step);
        const double v = score(d);
        if (v > best) {
            best = v;
            best_d = d;
        }
    }
    const double lo = std::max(bracket.begin, best_d - step);
    const double hi = std::min(bracket.end, best_d + step);
    if (!(hi > lo))
        return best_d;
    const auto refined = golden_section_maximize(score, lo, hi, tolerance);
    return refined.value >= best ? refined.x : best_d;
}

std::vector<SweepRow> mode_fidelity_sweep(const GemConfig& config_template,
                                          Interval interval,
                                          std::span<const double> betas,
                                          std::span<const long> modes,
                                          const SweepOptions& options)
{
    if (!options.delta.empty() && options.delta.size() != betas.size())
        throw std::invalid_argument("sweep: one delta per beta required");
    for (double b : betas) {
        if (!(b > 0.0))
            throw config_error("betas", "optical depths must be positive");
    }
    const double half_band = 0.5 * config_template.bandwidth();
    std::vector<PulseSpec> pulses;
    pulses.reserve(modes.size());
    for (long n : modes) {
        pulses.push_back(make_plane_wave_mode(n, interval.begin, interval.end));
        if (std::abs(pulses.back().mode_frequency()) > half_band * (1.0 + 1e-12))
            throw config_error("modes", "mode " + std::to_string(n) +
                                            " lies outside the memory band");
    }

    const std::size_t chunk = std::max<std::size_t>(1, options.batch_size);
    const std::size_t chunks = (modes.size() + chunk - 1) / chunk;
    std::vector<SweepRow> rows(betas.size() * modes.size());
    parallel_for(betas.size() * chunks, options.workers, [&](std::size_t task) {
        const std::size_t b = task / chunks;
        const std::size_t first = (task % chunks) * chunk;
        const std::size_t last = std::min(modes.size(), first + chunk);
        GemConfig config = with_optical_depth(config_template, betas[b]);
        config.stark.delta_offset =
            options.delta.empty() ? 0.0 : options.delta[b];
        const auto records = run_gem_batch(
            config, std::span(pulses).subspan(first, last - first));
        for (std::size_t i = first; i < last; ++i) {
            auto& row = rows[b * modes.size() + i];
            row.beta = betas[b];
            row.mode = modes[i];
            row.report = storage_report(records[i - first]);
        }
    });
    return rows;
}

DeltaSearch find_delta(const GemConfig& config_template, Interval interval,
                       long probe_mode, const DeltaSearchOptions& options)
{
    const PulseSpec probe =
        make_plane_wave_mode(probe_mode, interval.begin, interval.end);
    const double half_band = 0.5 * config_template.bandwidth();
    if (std::abs(probe.mode_frequency()) > half_band * (1.0 + 1e-12))
        throw config_error("probe_mode", "probe mode lies outside the band");

    DeltaSearch result;
    auto run_at = [&](double delta) {
        GemConfig config = config_template;
        config.stark.delta_offset = delta;
        ++result.evaluations;
        return storage_report(run_gem(config, probe));
    };

    const double dt = config_template.grid.dt();
    GemConfig base = config_template;
    base.stark.delta_offset = 0.0;
    const auto baseline = run_gem(base, probe);
    ++result.evaluations;
    const auto base_report = storage_report(baseline);
    result.fidelity_before = base_report.fidelity;

    const double resolution = 2.0 * std::numbers::pi / interval.length();
    result.estimate = estimate_output_shift(
        baseline.input_series, echo_part(baseline), dt,
        {-half_band, half_band}, 1e-3 * resolution);

    const double lo = result.estimate - 0.5 * resolution;
    const double hi = result.estimate + 0.5 * resolution;
    const auto best = golden_section_maximize(
        [&](double d) { return run_at(d).fidelity; }, lo, hi,
        options.relative_tolerance * (hi - lo));

    if (best.value > result.fidelity_before) {
        result.delta = best.x;
        result.fidelity_after = best.value;
        result.improved = true;
    } else {
        result.delta = 0.0;
        result.fidelity_after = result.fidelity_before;
        result.improved = false;
    }
    return result;
}

double echo_peak_time(const FieldRecord& record, Interval window)
{
    const auto [first, last] = window_indices(record.grid(), window);
    const auto& out = record.output_series;
    std::size_t best = first;
    for (std::size_t i = first; i <= last; ++i) {
        if (std::abs(out[i]) > std::abs(out[best]))
            best = i;
    }
    double offset = 0.0;
    if (best > first && best < last) {
        const double ym = std::abs(out[best - 1]);
        const double y0 = std::abs(out[best]);
        const double yp = std::abs(out[best + 1]);
        const double curv = ym - 2.0 * y0 + yp;
        if (curv < 0.0)
            offset = 0.5 * (ym - yp) / curv;
    }
    return record.grid().t(best) + offset * record.grid().dt();
}

double excitation_balance_error(const FieldRecord& record)
{
    const Grid& grid = record.grid();
    const auto& x = record.excitation;
    const double scale = record.config.linear_density / record.config.g;
    double peak = 0.0;
    for (const auto& v : record.input_series)
        peak = std::max(peak, std::norm(v));
    if (!(peak > 0.0))
        throw analysis_error("excitation_balance_error: zero input flux");
    // Flux of the step-mean field, the form the trapezoidal time update
    // conserves exactly.
    auto step_flux = [](complex a, complex b) { return std::norm(0.5 * (a + b)); };
    const auto& in = record.input_series;
    const auto& out = record.output_series;
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < grid.nt; ++n) {
        const double rate = scale * (x[n + 1] - x[n]) / grid.dt();
        const double flux =
            step_flux(in[n], in[n + 1]) - step_flux(out[n], out[n + 1]);
        worst = std::max(worst, std::abs(rate - flux));
    }
    return worst / peak;
}

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("pearson_correlation: size mismatch");
    const auto n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> spectrum_magnitude(std::span<const complex> e, double dt,
                                       std::span<const double> omegas)
{
    double peak = 0.0;
    for (const auto& v : e)
        peak = std::max(peak, std::abs(v));
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(e[i]) > 1e-12 * peak)
            support.push_back(i);
    }
    std::vector<double> out(omegas.size());
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        complex sum;
        for (auto i : support)
            sum += e[i] * std::polar(1.0, omegas[k] * static_cast<double>(i) * dt);
        out[k] = std::abs(sum) * dt;
    }
    return out;
}

double spectral_profile_correlation(const FieldRecord& record,
                                    std::size_t row, double slope)
{
    const Grid& grid = record.grid();
    if (row >= record.polarisation.rows())
        throw std::out_of_range("spectral_profile_correlation: row");
    const auto alpha = record.polarisation.row(row);
    std::vector<double> magnitude(grid.nz);
    std::vector<double> omegas(grid.nz);
    for (std::size_t j = 0; j < grid.nz; ++j) {
        magnitude[j] = std::abs(alpha[j]);
        omegas[j] = slope * grid.z(j);
    }
    const auto spectrum =
        spectrum_magnitude(record.input_series, grid.dt(), omegas);
    return pearson_correlation(magnitude, spectrum);
}

} // namespace gem
