#include "gem/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gem/errors.hpp"
#include "gem/fft.hpp"

namespace gem {

namespace {

constexpr double floor_ratio = 1e-12;

// Transform with a shared plan; `work` has length n.
void transform_into(const Fft& fft, std::span<const complex> row,
                    std::span<const double> taper, double z_min, double dz,
                    std::span<const double> k_axis, std::vector<complex>& work,
                    std::span<complex> out)
{
    const std::size_t n = row.size();
    for (std::size_t j = 0; j < n; ++j)
        work[j] = taper.empty() ? row[j] : row[j] * taper[j];
    fft.forward(work);
    const double scale = dz / std::sqrt(2.0 * std::numbers::pi);
    const std::size_t half = n / 2;
    for (std::size_t m = 0; m < n; ++m) {
        // Centered index m maps to FFT bin (m + n - half) mod n.
        const std::size_t bin = (m + n - half) % n;
        out[m] = work[bin] * scale * std::polar(1.0, -k_axis[m] * z_min);
    }
}

void check_floor(const KSpaceRecord& ks, std::size_t r)
{
    const double peak =
        *std::max_element(ks.psi_energy.begin(), ks.psi_energy.end());
    if (!(peak > 0.0) || !(ks.psi_energy[r] > floor_ratio * peak))
        throw analysis_error("excitation below analysis floor");
}

std::size_t zero_bin(const KSpaceRecord& ks) { return ks.k_axis.size() / 2; }

} // namespace

std::size_t KSpaceRecord::row(std::size_t t_index) const
{
    auto it = std::lower_bound(row_index.begin(), row_index.end(), t_index);
    if (it == row_index.end() || *it != t_index)
        throw std::out_of_range("time index " + std::to_string(t_index) +
                                " not stored in k-space record");
    return static_cast<std::size_t>(it - row_index.begin());
}

std::vector<double> centered_k_axis(std::size_t n, double dz)
{
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dz);
    const auto half = static_cast<long>(n / 2);
    for (std::size_t m = 0; m < n; ++m)
        k[m] = dk * static_cast<double>(static_cast<long>(m) - half);
    return k;
}

std::vector<double> cosine_taper(std::size_t n, double fraction)
{
    std::vector<double> w(n, 1.0);
    const auto ramp = static_cast<std::size_t>(
        std::lround(fraction * static_cast<double>(n)));
    if (ramp == 0)
        return w;
    for (std::size_t j = 0; j < ramp && j < n; ++j) {
        const double v = 0.5 * (1.0 - std::cos(std::numbers::pi *
                                               static_cast<double>(j) /
                                               static_cast<double>(ramp)));
        w[j] = std::min(w[j], v);
        w[n - 1 - j] = std::min(w[n - 1 - j], v);
    }
    return w;
}

std::vector<complex> spatial_transform(std::span<const complex> row,
                                       double z_min, double dz)
{
    Fft fft(row.size());
    const auto k = centered_k_axis(row.size(), dz);
    std::vector<complex> work(row.size());
    std::vector<complex> out(row.size());
    transform_into(fft, row, {}, z_min, dz, k, work, out);
    return out;
}

KSpaceRecord to_kspace(const FieldRecord& record, double linear_density,
                       const KSpaceOptions& options)
{
    const Grid& grid = record.grid();
    const std::size_t nz = grid.nz;
    if (record.e_field.cols() != nz || record.polarisation.cols() != nz)
        throw std::invalid_argument("to_kspace: record has no stored rows");
    if (!(options.taper_fraction >= 0.0 && options.taper_fraction < 0.5))
        throw std::invalid_argument("to_kspace: taper fraction in [0, 0.5)");

    KSpaceRecord ks;
    ks.k_axis = centered_k_axis(nz, grid.dz());
    ks.dk = 2.0 * std::numbers::pi / (static_cast<double>(nz) * grid.dz());
    ks.linear_density = linear_density;
    ks.taper_fraction = options.taper_fraction;
    ks.row_index = record.row_index;
    for (auto i : ks.row_index) {
        ks.times.push_back(grid.t(i));
        ks.slope.push_back(record.config.stark.eval(grid.t(i)));
    }
    ks.norm_factor.resize(nz);
    ks.multiplier.resize(nz);
    const double dz = grid.dz();
    for (std::size_t m = 0; m < nz; ++m) {
        const double k = ks.k_axis[m];
        const double half_angle = 0.5 * k * dz;
        // The Nyquist bin (half_angle = -pi/2) has no finite symbol.
        const bool matched = options.wavenumber == Wavenumber::trapezoid &&
                             std::abs(half_angle) < 0.5 * std::numbers::pi - 1e-9;
        ks.multiplier[m] = matched ? 2.0 / dz * std::tan(half_angle) : k;
        ks.norm_factor[m] = std::hypot(ks.multiplier[m], linear_density);
    }

    const std::size_t rows = record.e_field.rows();
    ks.psi = ComplexMatrix(rows, nz);
    ks.phi = ComplexMatrix(rows, nz);
    const auto taper = options.taper_fraction > 0.0
                           ? cosine_taper(nz, options.taper_fraction)
                           : std::vector<double>{};
    Fft fft(nz);
    std::vector<complex> work(nz);
    std::vector<complex> e_k(nz);
    std::vector<complex> a_k(nz);
    for (std::size_t r = 0; r < rows; ++r) {
        transform_into(fft, record.e_field.row(r), taper, grid.z_min,
                       grid.dz(), ks.k_axis, work, e_k);
        transform_into(fft, record.polarisation.row(r), taper, grid.z_min,
                       grid.dz(), ks.k_axis, work, a_k);
        auto psi = ks.psi.row(r);
        auto phi = ks.phi.row(r);
        for (std::size_t m = 0; m < nz; ++m) {
            const complex ke = ks.multiplier[m] * e_k[m];
            const complex na = linear_density * a_k[m];
            psi[m] = ke + na;
            phi[m] = ke - na;
        }
        double energy = 0.0;
        for (const auto& v : psi)
            energy += std::norm(v);
        ks.psi_energy.push_back(energy);
    }
    return ks;
}

double k_centroid(const KSpaceRecord& ks, std::size_t t_index)
{
    const std::size_t r = ks.row(t_index);
    check_floor(ks, r);
    const auto psi = ks.psi.row(r);
    const std::size_t zero = zero_bin(ks);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < psi.size(); ++m) {
        if (m == zero)
            continue;
        const double w = std::norm(psi[m]);
        num += ks.k_axis[m] * w;
        den += w;
    }
    return num / den;
}

double phi_residual(const KSpaceRecord& ks, std::size_t t_index)
{
    const std::size_t r = ks.row(t_index);
    check_floor(ks, r);
    const auto psi = ks.psi.row(r);
    const auto phi = ks.phi.row(r);
    const std::size_t zero = zero_bin(ks);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < psi.size(); ++m) {
        if (m == zero)
            continue;
        num += std::norm(phi[m]);
        den += std::norm(psi[m]);
    }
    return std::sqrt(num / den);
}

double polariton_norm(const KSpaceRecord& ks, std::size_t t_index)
{
    const std::size_t r = ks.row(t_index);
    const auto psi = ks.psi.row(r);
    double sum = 0.0;
    for (std::size_t m = 0; m < psi.size(); ++m) {
        const double nf = ks.norm_factor[m];
        if (nf > 0.0)
            sum += std::norm(psi[m]) / (nf * nf);
    }
    return sum * ks.dk;
}

double psi_norm(const KSpaceRecord& ks, std::size_t t_index)
{
    const auto psi = ks.psi.row(ks.row(t_index));
    double sum = 0.0;
    for (const auto& v : psi)
        sum += std::norm(v);
    return sum * ks.dk;
}

double psi_magnitude(const KSpaceRecord& ks, std::size_t t_index, double k)
{
    const auto psi = ks.psi.row(ks.row(t_index));
    const double pos = (k - ks.k_axis.front()) / ks.dk;
    if (pos <= 0.0)
        return std::abs(psi.front());
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= psi.size())
        return std::abs(psi.back());
    const double f = pos - static_cast<double>(i);
    return (1.0 - f) * std::abs(psi[i]) + f * std::abs(psi[i + 1]);
}

StorageDiagnostics storage_diagnostics(const FieldRecord& record,
                                       Interval window, double taper_fraction,
                                       double min_slope_fraction)
{
    const double n = record.config.linear_density;
    const auto plain = to_kspace(record, n);
    const auto tapered = to_kspace(record, n, {Wavenumber::trapezoid, taper_fraction});
    const auto& stark = record.config.stark;

    StorageDiagnostics d;
    std::vector<double> pol;
    std::vector<double> psi;
    for (std::size_t r = 0; r < plain.row_index.size(); ++r) {
        const double t = plain.times[r];
        if (!window.contains(t))
            continue;
        const std::size_t i = plain.row_index[r];
        d.times.push_back(t);
        d.slope.push_back(plain.slope[r]);
        d.centroid.push_back(k_centroid(plain, i));
        pol.push_back(polariton_norm(plain, i));
        psi.push_back(psi_norm(plain, i));
        d.phi_residual_max = std::max(d.phi_residual_max, phi_residual(tapered, i));
    }
    if (d.times.size() < 3)
        throw analysis_error("storage window holds fewer than three stored rows");

    auto drift = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return (*hi - *lo) / *hi;
    };
    d.polariton_norm_drift = drift(pol);
    d.psi_norm_drift = drift(psi);

    const double floor = min_slope_fraction * std::abs(stark.eta0);
    for (std::size_t r = 1; r + 1 < d.times.size(); ++r) {
        const double eta = d.slope[r];
        // Both neighbours must share the slope regime of the centre row.
        if (std::abs(eta) < floor || std::abs(d.slope[r - 1]) < floor ||
            std::abs(d.slope[r + 1]) < floor)
            continue;
        const double rate = (d.centroid[r + 1] - d.centroid[r - 1]) /
                            (d.times[r + 1] - d.times[r - 1]);
        d.centroid_slope_error =
            std::max(d.centroid_slope_error, std::abs(rate + eta) / std::abs(eta));
    }

    for (const auto& f : stark.freeze_intervals) {
        std::vector<double> c;
        for (std::size_t r = 0; r < d.times.size(); ++r) {
            if (d.times[r] > f.begin && d.times[r] <= f.end)
                c.push_back(d.centroid[r]);
        }
        if (c.size() < 2)
            continue;
        const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
        double mean = 0.0;
        for (double v : c)
            mean += v;
        mean /= static_cast<double>(c.size());
        d.centroid_freeze_drift =
            std::max(d.centroid_freeze_drift, (*hi - *lo) / std::abs(mean));
    }
    return d;
}

} // namespace gem
