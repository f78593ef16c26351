#pragma once

// Residue decomposition x = 3*mu + r of odd integers and the two base
// sequences every sibling set is built from:
//   z_n = (4^n - 1) / 3          = 1, 5, 21, 85, 341, ...
//   w_n = (z_n - (z_n mod 3)) / 3 = 0, 1, 7, 28, 113, 455, ...

#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

#include "collatz/integer.hpp"

namespace collatz {

/// An odd positive integer together with its class mod 3 and the multiple
/// mu such that value = 3 * mu + residue.
///
/// For residue 1 the multiple is even (1 itself has mu = 0); for residues
/// 0 and 2 it is odd. Both follow from oddness of value and are checked on
/// construction.
class OddInteger {
public:
    explicit OddInteger(Integer value) : value_(std::move(value)) {
        if (value_ < 1 || !is_odd(value_))
            throw InvalidArgument("expected an odd positive integer, got " + value_.str());
        residue_ = mod3(value_);
        multiple_ = (value_ - residue_) / 3;
        const bool multiple_odd = is_odd(multiple_);
        if ((residue_ == 1) == multiple_odd)
            throw InternalInconsistency("multiple parity rule broken for " + value_.str());
    }

    explicit OddInteger(std::uint64_t value) : OddInteger(Integer(value)) {}

    const Integer& value() const noexcept { return value_; }
    unsigned residue() const noexcept { return residue_; }
    const Integer& multiple() const noexcept { return multiple_; }

    bool is_leaf() const noexcept { return residue_ == 0; }

    friend bool operator==(const OddInteger& a, const OddInteger& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const OddInteger& a, const OddInteger& b) {
        const int c = a.value_.compare(b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    Integer value_;
    unsigned residue_ = 0;
    Integer multiple_;
};

inline OddInteger decompose(const Integer& x) { return OddInteger(x); }
inline OddInteger decompose(std::uint64_t x) { return OddInteger(x); }

/// z_n = (2^(2n) - 1) / 3, cross-checked against 1 + 4 + ... + 4^(n-1).
inline Integer z_term(unsigned n) {
    if (n < 1) throw InvalidArgument("z_term: index must be >= 1");
    Integer numerator = pow4(n) - 1;
    if (numerator % 3 != 0) throw InternalInconsistency("z_term: 4^n - 1 not divisible by 3");
    Integer closed = numerator / 3;

    Integer sum = 0;
    Integer term = 1;
    for (unsigned i = 1; i <= n; ++i) {
        sum += term;
        term <<= 2;
    }
    if (sum != closed)
        throw InternalInconsistency("z_term: closed form and geometric sum disagree at n=" +
                                    std::to_string(n));
    return closed;
}

namespace detail {

// 7 * sum_{i=1}^{count} 4^(3(i-1) + shift)
inline Integer seven_sum(unsigned count, unsigned shift) {
    Integer sum = 0;
    for (unsigned i = 1; i <= count; ++i) sum += pow4(3 * (i - 1) + shift);
    return 7 * sum;
}

// Piecewise closed form of w_n selected by n mod 3.
inline Integer w_piecewise(unsigned n) {
    switch (n % 3) {
        case 0: return seven_sum(n / 3, 0);
        case 1: return seven_sum((n - 1) / 3, 1);
        default: return 1 + seven_sum((n - 2) / 3, 2);
    }
}

}  // namespace detail

/// w_n, the multiple of z_n. The piecewise closed form is authoritative and
/// must agree with (z_n - r) / 3; a mismatch throws InternalInconsistency.
inline Integer w_term(unsigned n) {
    if (n < 1) throw InvalidArgument("w_term: index must be >= 1");
    Integer piecewise = detail::w_piecewise(n);
    Integer z = z_term(n);
    unsigned r = mod3(z);
    Integer direct = (z - r) / 3;
    if (direct != piecewise)
        throw InternalInconsistency("w_term: piecewise form disagrees with (z_n - r)/3 at n=" +
                                    std::to_string(n));
    return piecewise;
}

/// Z and W memoized for indices 1..size(). Immutable after construction.
class BaseSequences {
public:
    explicit BaseSequences(unsigned up_to) {
        z_.reserve(up_to);
        w_.reserve(up_to);
        for (unsigned n = 1; n <= up_to; ++n) {
            z_.push_back(z_term(n));
            w_.push_back(w_term(n));
        }
    }

    unsigned size() const noexcept { return static_cast<unsigned>(z_.size()); }

    const Integer& z(unsigned n) const { return z_.at(checked(n)); }
    const Integer& w(unsigned n) const { return w_.at(checked(n)); }

private:
    std::size_t checked(unsigned n) const {
        if (n < 1 || n > z_.size())
            throw InvalidArgument("BaseSequences: index " + std::to_string(n) + " outside 1.." +
                                  std::to_string(z_.size()));
        return n - 1;
    }

    std::vector<Integer> z_;
    std::vector<Integer> w_;
};

}  // namespace collatz
