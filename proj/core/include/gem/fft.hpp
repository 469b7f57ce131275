#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gem {

/// Unnormalized 1-D complex DFT of fixed length, backed by FFTW.
/// forward: X_m = sum_j x_j exp(-2 pi i m j / n); inverse uses +i.
/// Instances may be shared between threads once constructed.
class Fft
{
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&&) noexcept;
    Fft& operator=(Fft&&) noexcept;

    std::size_t size() const { return m_n; }

    /// In place; data.size() must equal size().
    void forward(std::span<std::complex<double>> data) const;
    void inverse(std::span<std::complex<double>> data) const;

private:
    struct Plans;
    std::size_t m_n = 0;
    std::unique_ptr<Plans> m_plans;
};

/// Linear cross-correlation c[m] = sum_i conj(a[m - i]) b[i] for
/// m = 0 .. a.size() + b.size() - 2 (terms with m - i outside a vanish).
std::vector<std::complex<double>>
correlate_reversed(std::span<const std::complex<double>> a,
                   std::span<const std::complex<double>> b);

} // namespace gem
