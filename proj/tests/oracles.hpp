#pragma once

// Test-only oracles. Deliberately naive: plain halving loops and brute-force
// search, sharing no code with the library paths they check.

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

/// x0, x1, ..., 1 under the odd Collatz map, halving one bit at a time.
inline std::vector<std::uint64_t> orbit(std::uint64_t x) {
    std::vector<std::uint64_t> out{x};
    while (x != 1) {
        std::uint64_t y = 3 * x + 1;
        while (y % 2 == 0) y /= 2;
        x = y;
        out.push_back(x);
    }
    return out;
}

/// Exponent of 2 in m by repeated division.
inline unsigned valuation(std::uint64_t m) {
    unsigned a = 0;
    while (m % 2 == 0) {
        m /= 2;
        ++a;
    }
    return a;
}

/// Every odd v <= bound with f(v) = u, ascending.
inline std::vector<std::uint64_t> children(std::uint64_t u, std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 1; v <= bound; v += 2) {
        std::uint64_t y = 3 * v + 1;
        while (y % 2 == 0) y /= 2;
        if (y == u && !(u == 1 && v == 1)) out.push_back(v);
    }
    return out;
}

/// value -> depth for the tree truncated at depth K and value bound B: an
/// odd x belongs iff its orbit stays <= B and reaches 1 within K steps.
inline std::map<std::uint64_t, std::uint32_t> tree(std::uint32_t max_depth, std::uint64_t bound) {
    std::map<std::uint64_t, std::uint32_t> out;
    for (std::uint64_t x = 1; x <= bound; x += 2) {
        std::uint64_t v = x;
        std::uint32_t steps = 0;
        bool inside = true;
        while (v != 1 && inside) {
            std::uint64_t y = 3 * v + 1;
            while (y % 2 == 0) y /= 2;
            v = y;
            ++steps;
            inside = v <= bound && steps <= max_depth;
        }
        if (inside) out.emplace(x, steps);
    }
    return out;
}

}  // namespace oracle
