#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace invrep {

// Thrown when a construction would exceed the configured size cap (CLI exit code 4).
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a requested invariant / near-invariant space is empty (CLI exit code 3).
// The message names the obstruction (parity or divisibility).
struct EmptySubspace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense-allocation cap in matrix entries. INVREP_MAX_DIM overrides the default 2^24.
inline std::size_t max_entries() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("INVREP_MAX_DIM")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) return static_cast<std::size_t>(v);
        }
        return std::size_t{1} << 24;
    }();
    return cap;
}

inline void check_entries(std::size_t rows, std::size_t cols, const char* what) {
    if (rows != 0 && cols > max_entries() / rows)
        throw CapExceeded(std::string(what) + ": " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " exceeds configured cap of " +
                          std::to_string(max_entries()) + " entries (set INVREP_MAX_DIM to raise)");
}

} // namespace invrep
