#pragma once

// The accelerated Collatz map on odd integers,
//     f(x) = (3x + 1) / 2^a(x),   a(x) = 2-adic valuation of 3x + 1,
// and trajectory generation. This is the oracle the inverse tree is
// checked against.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/integer.hpp"

namespace collatz {

/// Raised by the fixed-width fast path when 3x + 1 would wrap.
class Overflow : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t kDefaultMaxSteps = 10'000;

/// Largest a with 2^a | m. m must be even and nonzero.
template <IntegerLike T>
unsigned valuation2(const T& m) {
    if (m == 0 || is_odd(m))
        throw InvalidArgument("valuation2: expected a positive even integer");
    return trailing_zeros(m);
}

struct ForwardStep {
    OddInteger next;
    unsigned exponent;
};

inline ForwardStep f_step(const OddInteger& x) {
    Integer y = 3 * x.value() + 1;
    unsigned a = valuation2(y);
    y >>= a;
    return {OddInteger(std::move(y)), a};
}

/// Fixed-width f for hot loops. x must be odd; throws Overflow if 3x + 1
/// does not fit.
template <UnsignedWord T>
constexpr std::pair<T, unsigned> f_step_fast(T x) {
    if (x > (std::numeric_limits<T>::max() - 1) / 3) throw Overflow("f_step_fast: 3x+1 overflows");
    T y = 3 * x + 1;
    unsigned a = static_cast<unsigned>(std::countr_zero(y));
    return {static_cast<T>(y >> a), a};
}

/// Orbit x0, x1, ..., xk with a(x0), ..., a(x_{k-1}).
struct TrajectoryRecord {
    OddInteger start;
    std::vector<OddInteger> values;  // x0 .. xk
    std::vector<unsigned> exponents; // one per step
    bool converged = false;

    std::size_t length() const noexcept { return exponents.size(); }
    const OddInteger& last() const { return values.back(); }
};

/// Iterates f from x0 until 1 is reached or max_steps steps were taken.
/// Running out of budget is a normal outcome (converged = false).
inline TrajectoryRecord trajectory(const OddInteger& x0, std::size_t max_steps = kDefaultMaxSteps) {
    if (max_steps == 0) throw InvalidArgument("trajectory: max_steps must be positive");
    TrajectoryRecord rec{x0, {x0}, {}, false};
    while (rec.values.back().value() != 1 && rec.exponents.size() < max_steps) {
        auto step = f_step(rec.values.back());
        rec.exponents.push_back(step.exponent);
        rec.values.push_back(std::move(step.next));
    }
    rec.converged = rec.values.back().value() == 1;
    return rec;
}

/// Streaming summary: length and peak only, no orbit retained.
template <IntegerLike T>
struct TrajectorySummary {
    T start{};
    std::size_t steps = 0;
    T peak{};
    bool converged = false;
};

template <IntegerLike T>
TrajectorySummary<T> summarize(const T& x0, std::size_t max_steps = kDefaultMaxSteps) {
    if (x0 == 0 || !is_odd(x0)) throw InvalidArgument("summarize: expected an odd positive integer");
    TrajectorySummary<T> s{x0, 0, x0, false};
    T x = x0;
    while (x != 1 && s.steps < max_steps) {
        if constexpr (UnsignedWord<T>) {
            x = f_step_fast(x).first;
        } else {
            x = 3 * x + 1;
            x >>= trailing_zeros(x);
        }
        ++s.steps;
        if (x > s.peak) s.peak = x;
    }
    s.converged = x == 1;
    return s;
}

struct SweepStats {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::size_t starts = 0;
    std::size_t max_steps_seen = 0;
    std::uint64_t argmax_steps = 0;
    std::uint64_t max_peak = 0;
    std::uint64_t argmax_peak = 0;
    std::vector<std::uint64_t> unconverged;
};

/// Forward sweep over every odd start in [first, last]. Start ranges are
/// split across `workers` threads; per-worker results are merged in start
/// order so the outcome does not depend on the worker count.
inline SweepStats sweep(std::uint64_t first, std::uint64_t last,
                        std::size_t max_steps = kDefaultMaxSteps, unsigned workers = 0) {
    if (first < 1) first = 1;
    if (!is_odd(first)) ++first;
    SweepStats total;
    total.first = first;
    total.last = last;
    if (first > last) return total;

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t count = (last - first) / 2 + 1;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));

    std::vector<SweepStats> parts(workers);
    auto run = [&](unsigned w) {
        SweepStats& p = parts[w];
        const std::uint64_t lo = count * w / workers;
        const std::uint64_t hi = count * (w + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t x = first + 2 * i;
            auto s = summarize<std::uint64_t>(x, max_steps);
            ++p.starts;
            if (s.steps > p.max_steps_seen) {
                p.max_steps_seen = s.steps;
                p.argmax_steps = x;
            }
            if (s.peak > p.max_peak) {
                p.max_peak = s.peak;
                p.argmax_peak = x;
            }
            if (!s.converged) p.unconverged.push_back(x);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }

    for (const auto& p : parts) {
        total.starts += p.starts;
        // strict comparison keeps the smallest start on ties
        if (p.max_steps_seen > total.max_steps_seen) {
            total.max_steps_seen = p.max_steps_seen;
            total.argmax_steps = p.argmax_steps;
        }
        if (p.max_peak > total.max_peak) {
            total.max_peak = p.max_peak;
            total.argmax_peak = p.argmax_peak;
        }
        total.unconverged.insert(total.unconverged.end(), p.unconverged.begin(), p.unconverged.end());
    }
    return total;
}

}  // namespace collatz
