#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gem {

/// Invalid configuration. `path()` names the offending field, e.g.
/// "config.grid.nz".
class config_error : public std::invalid_argument
{
public:
    config_error(std::string path, const std::string& what)
        : std::invalid_argument(path.empty() ? what : path + ": " + what),
          m_path(std::move(path))
    {
    }

    const std::string& path() const noexcept { return m_path; }

private:
    std::string m_path;
};

/// Raised when an integration produces non-finite values.
class solver_error : public std::runtime_error
{
public:
    solver_error(const std::string& what, std::size_t time_index)
        : std::runtime_error(what + " (time index " +
                             std::to_string(time_index) + ")"),
          m_time_index(time_index)
    {
    }

    std::size_t time_index() const noexcept { return m_time_index; }

private:
    std::size_t m_time_index;
};

/// A diagnostic was requested where the excitation is too weak to define it.
class analysis_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace gem
