#pragma once

#include <span>
#include <vector>

#include "gem/field.hpp"
#include "gem/solver.hpp"

namespace gem {

/**
 * Normal modes of the stored rows of a FieldRecord.
 *
 *   psi(k, t) = k E~(k, t) + N alpha~(k, t)
 *   phi(k, t) = k E~(k, t) - N alpha~(k, t)
 *
 * with the unitary transform f~(k) = (2 pi)^(-1/2) int f(z) exp(-i k z) dz,
 * evaluated on the centered k axis (negative to positive). Transport runs
 * along dk/dt = -eta(t) in this convention.
 */
struct KSpaceRecord
{
    ComplexMatrix psi;
    ComplexMatrix phi;
    std::vector<double> k_axis;
    std::vector<double> norm_factor; // sqrt(k^2 + N^2)
    std::vector<double> multiplier;  // wavenumber applied to E~
    std::vector<std::size_t> row_index;
    std::vector<double> times;
    std::vector<double> slope; // eta(t) at each stored row
    std::vector<double> psi_energy; // sum |psi|^2 per stored row
    double dk = 0.0;
    double linear_density = 0.0;
    double taper_fraction = 0.0;

    /// Row position of grid time index t_index; throws if not stored.
    std::size_t row(std::size_t t_index) const;
};

enum class Wavenumber
{
    /// k itself, the Fourier variable of the continuum equations.
    continuum,
    /// (2 / dz) tan(k dz / 2), the symbol of the trapezoidal z-integration
    /// the solver uses, for which k E~ = N alpha~ holds exactly in the
    /// interior.
    trapezoid
};

struct KSpaceOptions
{
    /// Multiplier of E~ in psi and phi.
    Wavenumber wavenumber = Wavenumber::trapezoid;

    /// Fraction of nz tapered by a raised cosine at each end before the
    /// transform (0 disables). The Phi residual is meant to be read off a
    /// tapered record, because the boundary field breaks periodicity.
    double taper_fraction = 0.0;
};

/// Centered wavenumber axis (rad/mm) dual to a uniform grid of n points.
std::vector<double> centered_k_axis(std::size_t n, double dz);

/// Unitary transform of one spatial row sampled at z_min + j dz, returned
/// on centered_k_axis(). Sum |f~|^2 dk equals dz * sum |f|^2.
std::vector<complex> spatial_transform(std::span<const complex> row,
                                       double z_min, double dz);

/// Raised-cosine taper with `fraction` of the points ramped at each end.
std::vector<double> cosine_taper(std::size_t n, double fraction);

KSpaceRecord to_kspace(const FieldRecord& record, double linear_density,
                       const KSpaceOptions& options = {});

/// Sum k |psi|^2 / sum |psi|^2 at t_index, k = 0 bin excluded.
double k_centroid(const KSpaceRecord& ks, std::size_t t_index);

/// ||phi|| / ||psi|| at t_index, k = 0 bin excluded.
double phi_residual(const KSpaceRecord& ks, std::size_t t_index);

/// Sum |psi / sqrt(k^2 + N^2)|^2 dk at t_index.
double polariton_norm(const KSpaceRecord& ks, std::size_t t_index);

/// Sum |psi|^2 dk at t_index.
double psi_norm(const KSpaceRecord& ks, std::size_t t_index);

/// |psi| at wavenumber k (linear interpolation between bins).
double psi_magnitude(const KSpaceRecord& ks, std::size_t t_index, double k);

/// Normal-mode diagnostics over the stored rows inside a storage window.
struct StorageDiagnostics
{
    double phi_residual_max = 0.0;     // tapered transform
    double polariton_norm_drift = 0.0; // (max - min) / max
    double psi_norm_drift = 0.0;       // (max - min) / max
    double centroid_slope_error = 0.0; // max |dk/dt + eta| / |eta|
    /// (max - min) / |mean| of the centroid inside freeze intervals; -1
    /// when no freeze interval holds two stored rows of the window.
    double centroid_freeze_drift = -1.0;
    std::vector<double> times;
    std::vector<double> centroid;
    std::vector<double> slope;
};

/// Slopes below `min_slope_fraction` of |eta0| (switching, freezes) are
/// left out of the centroid slope check.
StorageDiagnostics storage_diagnostics(const FieldRecord& record,
                                       Interval window, double taper_fraction,
                                       double min_slope_fraction = 0.05);

} // namespace gem
