#include "gem/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gem {

std::size_t default_workers()
{
    if (const char* env = std::getenv("GEM_SIM_WORKERS")) {
        try {
            const long n = std::stol(env);
            if (n > 0)
                return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

} // namespace gem
