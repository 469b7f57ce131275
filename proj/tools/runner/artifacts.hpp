#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gem/field.hpp"
#include "gem/metrics.hpp"

namespace gem::runner {

/// Full-precision scientific text of one value ("%.16e").
std::string format_number(double v);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Files written into one output directory. Each write is serialised and
/// the file is recorded for the manifest.
class ArtifactSet
{
public:
    explicit ArtifactSet(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return m_dir; }

    /// Writes `text` to dir/name and records it.
    void write_text(const std::string& name, const std::string& text);

    /// One header line plus numeric rows.
    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

    /// Magnitude map: header "t_us,<axis...>", then one row per stored time
    /// with |m(r, c)| for every `stride`-th column.
    void write_magnitude_map(const std::string& name, const ComplexMatrix& m,
                             std::span<const double> times,
                             std::span<const double> axis, std::size_t stride);

    /// t_us plus real and imaginary parts of the input and output series.
    void write_series(const std::string& name, double dt,
                      std::span<const complex> input,
                      std::span<const complex> output);

    void write_sweep(const std::string& name, std::span<const SweepRow> rows);

    const std::vector<std::string>& files() const { return m_files; }

private:
    std::filesystem::path m_dir;
    std::vector<std::string> m_files;
    std::mutex m_mutex;
};

} // namespace gem::runner
