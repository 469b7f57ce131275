#include "runner/artifacts.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace gem::runner {

std::string format_number(double v)
{
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.16e", v);
    return buf.data();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex += digits[md[i] >> 4];
        hex += digits[md[i] & 0xf];
    }
    return hex;
}

ArtifactSet::ArtifactSet(std::filesystem::path dir) : m_dir(std::move(dir))
{
    std::filesystem::create_directories(m_dir);
}

void ArtifactSet::write_text(const std::string& name, const std::string& text)
{
    std::lock_guard lock(m_mutex);
    std::ofstream out(m_dir / name, std::ios::binary);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + (m_dir / name).string());
    m_files.push_back(name);
}

void ArtifactSet::write_csv(const std::string& name,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows)
{
    std::ostringstream s;
    for (std::size_t i = 0; i < header.size(); ++i)
        s << (i ? "," : "") << header[i];
    s << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            s << (i ? "," : "") << format_number(row[i]);
        s << '\n';
    }
    write_text(name, s.str());
}

void ArtifactSet::write_magnitude_map(const std::string& name,
                                      const ComplexMatrix& m,
                                      std::span<const double> times,
                                      std::span<const double> axis,
                                      std::size_t stride)
{
    if (times.size() != m.rows() || axis.size() != m.cols())
        throw std::invalid_argument("magnitude map: shape mismatch");
    std::ostringstream s;
    s << "t_us";
    for (std::size_t c = 0; c < axis.size(); c += stride)
        s << ',' << format_number(axis[c]);
    s << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        s << format_number(times[r]);
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); c += stride)
            s << ',' << format_number(std::abs(row[c]));
        s << '\n';
    }
    write_text(name, s.str());
}

void ArtifactSet::write_series(const std::string& name, double dt,
                               std::span<const complex> input,
                               std::span<const complex> output)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i)
        rows.push_back({static_cast<double>(i) * dt, input[i].real(),
                        input[i].imag(), output[i].real(), output[i].imag()});
    write_csv(name, {"t_us", "re_in", "im_in", "re_out", "im_out"}, rows);
}

void ArtifactSet::write_sweep(const std::string& name,
                              std::span<const SweepRow> rows)
{
    std::ostringstream s;
    s << "beta,mode_n,sigma,fidelity,shape,tau_us,delta\n";
    for (const auto& r : rows) {
        s << format_number(r.beta) << ',' << r.mode << ','
          << format_number(r.report.sigma) << ','
          << format_number(r.report.fidelity) << ','
          << format_number(r.report.shape) << ',' << format_number(r.report.tau)
          << ',' << format_number(r.report.delta) << '\n';
    }
    write_text(name, s.str());
}

} // namespace gem::runner
