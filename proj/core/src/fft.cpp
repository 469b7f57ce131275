#include "gem/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace gem {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p)
{
    return reinterpret_cast<fftw_complex*>(p);
}

} // namespace

struct Fft::Plans
{
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        if (forward)
            fftw_destroy_plan(forward);
        if (inverse)
            fftw_destroy_plan(inverse);
    }
};

Fft::Fft(std::size_t n) : m_n(n), m_plans(std::make_unique<Plans>())
{
    if (n == 0)
        throw std::invalid_argument("Fft: zero length");
    // Plans are made on scratch buffers with FFTW_ESTIMATE and applied via
    // the new-array interface. Every buffer handed to FFTW comes from
    // fftw_malloc or std::vector of std::complex, so alignment may differ;
    // FFTW_UNALIGNED keeps execution valid for both.
    std::vector<std::complex<double>> scratch(n);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    m_plans->forward =
        fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                         FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    m_plans->inverse =
        fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                         FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!m_plans->forward || !m_plans->inverse)
        throw std::runtime_error("Fft: planning failed");
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<std::complex<double>> data) const
{
    if (data.size() != m_n)
        throw std::invalid_argument("Fft: length mismatch");
    fftw_execute_dft(m_plans->forward, as_fftw(data.data()),
                     as_fftw(data.data()));
}

void Fft::inverse(std::span<std::complex<double>> data) const
{
    if (data.size() != m_n)
        throw std::invalid_argument("Fft: length mismatch");
    fftw_execute_dft(m_plans->inverse, as_fftw(data.data()),
                     as_fftw(data.data()));
}

std::vector<std::complex<double>>
correlate_reversed(std::span<const std::complex<double>> a,
                   std::span<const std::complex<double>> b)
{
    if (a.empty() || b.empty())
        return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    std::size_t n = 1;
    while (n < out_len)
        n <<= 1;
    Fft fft(n);
    std::vector<std::complex<double>> fa(n);
    std::vector<std::complex<double>> fb(n);
    for (std::size_t i = 0; i < a.size(); ++i)
        fa[i] = std::conj(a[i]);
    std::copy(b.begin(), b.end(), fb.begin());
    fft.forward(fa);
    fft.forward(fb);
    for (std::size_t i = 0; i < n; ++i)
        fa[i] *= fb[i];
    fft.inverse(fa);
    const double scale = 1.0 / static_cast<double>(n);
    std::vector<std::complex<double>> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i)
        out[i] = fa[i] * scale;
    return out;
}

} // namespace gem
