#pragma once

// Integer plumbing shared by every module: the arbitrary-precision type,
// power-of-two helpers, decimal parsing and the exception hierarchy.

#include <bit>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace collatz {

// Expression templates off: every arithmetic result is a value, never a view
// into its operands.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

template <class T>
concept UnsignedWord = std::unsigned_integral<T> && !std::same_as<T, bool>;

template <class T>
concept IntegerLike = UnsignedWord<T> || std::same_as<T, Integer>;

// ---------------------------------------------------------------------------
// errors

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation on a caller-supplied value (even input, zero, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// g is undefined on multiples of three: such vertices are leaves.
class LeafParentError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Two formulations of the same quantity disagreed. Always a bug.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// helpers

inline Integer pow2(unsigned exponent) {
    Integer r = 1;
    r <<= exponent;
    return r;
}

inline Integer pow4(unsigned exponent) { return pow2(2 * exponent); }

template <IntegerLike T>
bool is_odd(const T& x) {
    if constexpr (UnsignedWord<T>) {
        return (x & 1u) != 0;
    } else {
        return boost::multiprecision::bit_test(x, 0);
    }
}

template <IntegerLike T>
unsigned mod3(const T& x) {
    return static_cast<unsigned>(x % 3u);
}

/// Number of trailing zero bits; x must be nonzero.
template <IntegerLike T>
unsigned trailing_zeros(const T& x) {
    if constexpr (UnsignedWord<T>) {
        return static_cast<unsigned>(std::countr_zero(x));
    } else {
        return static_cast<unsigned>(boost::multiprecision::lsb(x));
    }
}

inline std::string to_string(const Integer& x) { return x.str(); }
inline std::string to_string(std::uint64_t x) { return std::to_string(x); }

/// Strict decimal parse: digits only, no sign, no whitespace.
inline Integer parse_decimal(std::string_view text) {
    if (text.empty()) throw InvalidArgument("empty number");
    Integer r = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw InvalidArgument("not a decimal integer: '" + std::string(text) + "'");
        r *= 10;
        r += static_cast<unsigned>(c - '0');
    }
    return r;
}

inline bool fits_u64(const Integer& x) {
    return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Integer& x) {
    if (!fits_u64(x)) throw InvalidArgument("value out of 64-bit range: " + x.str());
    return x.convert_to<std::uint64_t>();
}

}  // namespace collatz
