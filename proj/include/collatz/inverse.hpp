#pragma once

// The inverse map g and the sibling set H(u) = {v_1, v_2, ...} of a parent
// u not divisible by 3.
//
//   class 1 (u = 3*mu + 1):  v_n = (4^n u - 1) / 3          = z_n + 4^n mu
//   class 2 (u = 3*mu + 2):  v_n = (2^(2n-1) u - 1) / 3     = z_n + 2^(2n-1) mu
//   v_{n+1} = 1 + 4 v_n,  v_{n+1} - v_n = 2^e(n) u
//
// Every value is computed by more than one route; disagreements throw
// InternalInconsistency instead of returning a wrong vertex.

#include <cstddef>
#include <iterator>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/integer.hpp"

namespace collatz {

namespace detail {

inline void require_parent(const OddInteger& u, const char* who) {
    if (u.is_leaf())
        throw LeafParentError(std::string(who) + ": " + u.value().str() +
                              " is divisible by 3 and has no children");
}

inline void require_index(std::size_t n, const char* who) {
    if (n < 1) throw InvalidArgument(std::string(who) + ": sibling index must be >= 1");
}

}  // namespace detail

/// Exponent e with 3 v_n + 1 = 2^e u: 2n for class 1, 2n - 1 for class 2.
inline unsigned branch_exponent(const OddInteger& u, unsigned n) {
    detail::require_parent(u, "branch_exponent");
    detail::require_index(n, "branch_exponent");
    return u.residue() == 1 ? 2 * n : 2 * n - 1;
}

/// Inverse of branch_exponent: the sibling index whose branch uses exponent e.
/// Returns nullopt when e has the wrong parity for u's class.
inline std::optional<unsigned> branch_index(const OddInteger& u, unsigned e) {
    detail::require_parent(u, "branch_index");
    if (e < 1) return std::nullopt;
    if (u.residue() == 1) {
        if (e % 2 != 0) return std::nullopt;
        return e / 2;
    }
    if (e % 2 == 0) return std::nullopt;
    return (e + 1) / 2;
}

// ---------------------------------------------------------------------------
// the four routes to v_n

/// (2^e u - 1) / 3.
inline Integer v_direct(const OddInteger& u, unsigned n) {
    const unsigned e = branch_exponent(u, n);
    Integer num = (u.value() << e) - 1;
    if (num % 3 != 0) throw InternalInconsistency("v_direct: 2^e u - 1 not divisible by 3");
    return num / 3;
}

/// z_n + 2^(2n) mu_1, or z_n + 2^(2n-1) mu_2.
inline Integer v_multiple_form(const OddInteger& u, unsigned n) {
    const unsigned e = branch_exponent(u, n);
    return z_term(n) + (u.multiple() << e);
}

/// Initial vertex from the positional form: u + mu_1, or u - (mu_2 + 1).
inline Integer v1_positional(const OddInteger& u) {
    detail::require_parent(u, "v1_positional");
    if (u.residue() == 1) return u.value() + u.multiple();
    return u.value() - (u.multiple() + 1);
}

/// v_n = z_{n-1} + 4^(n-1) v_1, seeded from the positional v_1.
inline Integer v_recurrence(const OddInteger& u, unsigned n) {
    detail::require_index(n, "v_recurrence");
    Integer v1 = v1_positional(u);
    if (n == 1) return v1;
    return z_term(n - 1) + (v1 << (2 * (n - 1)));
}

/// v_n = u * sum_{i=1}^{n-1} 2^(2i) + (u + mu_1)         (class 1)
/// v_n = u * sum_{i=1}^{n-1} 2^(2i-1) + (u + mu_2) / 2   (class 2)
inline Integer v_closed_form(const OddInteger& u, unsigned n) {
    detail::require_parent(u, "v_closed_form");
    detail::require_index(n, "v_closed_form");
    Integer sum = 0;
    Integer v1;
    if (u.residue() == 1) {
        for (unsigned i = 1; i < n; ++i) sum += pow2(2 * i);
        v1 = u.value() + u.multiple();
    } else {
        for (unsigned i = 1; i < n; ++i) sum += pow2(2 * i - 1);
        Integer twice = u.value() + u.multiple();
        if (is_odd(twice)) throw InternalInconsistency("v_closed_form: u + mu_2 is odd");
        v1 = twice / 2;
    }
    return u.value() * sum + v1;
}

struct BranchForms {
    Integer direct;
    Integer multiple_form;
    Integer recurrence;
    Integer closed_form;

    bool agree() const {
        return direct == multiple_form && direct == recurrence && direct == closed_form;
    }
};

inline BranchForms branch_forms(const OddInteger& u, unsigned n) {
    return {v_direct(u, n), v_multiple_form(u, n), v_recurrence(u, n), v_closed_form(u, n)};
}

/// g_n(u) = v_n. Cross-checked against the multiple form.
inline OddInteger g_branch(const OddInteger& u, unsigned n) {
    Integer v = v_direct(u, n);
    if (v != v_multiple_form(u, n))
        throw InternalInconsistency("g_branch: direct and multiple forms disagree for u=" +
                                    u.value().str() + " n=" + std::to_string(n));
    return OddInteger(std::move(v));
}

/// v_1 = g_1(u). For u > 1 a class-1 parent lies below its initial vertex
/// and a class-2 parent above it; u = 1 maps to itself (the trivial cycle).
inline OddInteger initial_vertex(const OddInteger& u) {
    OddInteger v1 = g_branch(u, 1);
    if (v1.value() != v1_positional(u))
        throw InternalInconsistency("initial_vertex: positional form disagrees for u=" +
                                    u.value().str());
    if (u.residue() == 2 && v1.value() * 2 != u.value() + u.multiple())
        throw InternalInconsistency("initial_vertex: (u + mu_2)/2 disagrees for u=" +
                                    u.value().str());
    if (u.value() > 1) {
        const bool above = v1.value() > u.value();
        if (above != (u.residue() == 1))
            throw InternalInconsistency("initial_vertex: positional property broken for u=" +
                                        u.value().str());
    }
    return v1;
}

// ---------------------------------------------------------------------------
// sibling streams

struct MaxIndex {
    std::size_t count;
};

struct ValueBound {
    Integer bound;
};

using SiblingStop = std::variant<MaxIndex, ValueBound>;

/// H(u) truncated by a stop criterion. Iteration is pull-based and
/// re-startable; each begin() starts a fresh stream at v_1.
class SiblingSet {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = OddInteger;
        using difference_type = std::ptrdiff_t;
        using reference = const OddInteger&;
        using pointer = const OddInteger*;

        iterator() = default;

        reference operator*() const { return *current_; }
        pointer operator->() const { return &*current_; }

        /// 1-based position of the current child.
        std::size_t index() const noexcept { return index_; }

        iterator& operator++() {
            ++index_;
            Integer next = 1 + 4 * current_->value();
            current_.emplace(std::move(next));
            check_stop();
            return *this;
        }
        void operator++(int) { ++*this; }

        friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

    private:
        friend class SiblingSet;
        iterator(OddInteger first, const SiblingStop* stop)
            : current_(std::move(first)), index_(1), stop_(stop) {
            check_stop();
        }

        void check_stop() {
            if (const auto* m = std::get_if<MaxIndex>(stop_)) {
                done_ = index_ > m->count;
            } else {
                done_ = current_->value() > std::get<ValueBound>(*stop_).bound;
            }
        }

        std::optional<OddInteger> current_;
        std::size_t index_ = 0;
        const SiblingStop* stop_ = nullptr;
        bool done_ = true;
    };

    SiblingSet(OddInteger parent, SiblingStop stop, std::size_t depth = 1)
        : parent_(std::move(parent)), stop_(std::move(stop)), depth_(depth) {
        detail::require_parent(parent_, "siblings");
        if (const auto* b = std::get_if<ValueBound>(&stop_); b && b->bound < 1)
            throw InvalidArgument("siblings: value bound must be >= 1");
    }

    const OddInteger& parent() const noexcept { return parent_; }
    const SiblingStop& stop() const noexcept { return stop_; }
    /// Depth of the children; the parent sits at depth() - 1.
    std::size_t depth() const noexcept { return depth_; }

    iterator begin() const { return iterator(initial_vertex(parent_), &stop_); }
    std::default_sentinel_t end() const noexcept { return {}; }

    std::vector<OddInteger> collect() const {
        std::vector<OddInteger> out;
        for (const auto& v : *this) out.push_back(v);
        return out;
    }

private:
    OddInteger parent_;
    SiblingStop stop_;
    std::size_t depth_;
};

inline SiblingSet siblings(const OddInteger& u, SiblingStop stop) {
    return SiblingSet(u, std::move(stop));
}

/// v_{n+1} - v_n = 2^(2n) u (class 1) or 2^(2n-1) u (class 2).
inline Integer sibling_gap(const OddInteger& u, unsigned n) {
    const unsigned e = branch_exponent(u, n);
    Integer gap = u.value() << e;
    if (gap != g_branch(u, n + 1).value() - g_branch(u, n).value())
        throw InternalInconsistency("sibling_gap: closed form disagrees with enumeration for u=" +
                                    u.value().str());
    return gap;
}

// ---------------------------------------------------------------------------
// multiples

/// m_n = (v_n - r_n) / 3 for the siblings of one parent, alongside the
/// piecewise closed form keyed by v_1's class:
///   v_1 = 0 (mod 3): m_n = w_{n-1} + 4^(n-1) mu_0
///   v_1 = 1 (mod 3): m_n = w_n     + 4^(n-1) mu_1
///   v_1 = 2 (mod 3): m_n = w_{n+1} + 4^(n-1) (mu_2 - 1)
/// with m_1 = mu_r. The w index offset (-1, 0, +1 above) is also searched
/// over {-1, 0, +1} so the offset that actually matches is reported.
struct MultiplesSequence {
    OddInteger parent;
    unsigned v1_class = 0;
    std::vector<Integer> terms;        // from the sibling values
    std::vector<Integer> closed_form;  // piecewise form with the stated offset
    int stated_w_offset = 0;
    std::optional<int> matched_w_offset;
    std::optional<std::size_t> first_disagreement;  // 0-based term index

    bool closed_form_agrees() const noexcept { return !first_disagreement.has_value(); }

    bool strictly_ascending() const {
        for (std::size_t i = 1; i < terms.size(); ++i)
            if (!(terms[i - 1] < terms[i])) return false;
        return true;
    }
};

namespace detail {

inline Integer multiples_closed_term(unsigned v1_class, const Integer& mu, unsigned n, int offset) {
    if (n == 1) return mu;
    const int w_index = static_cast<int>(n) + offset;
    if (w_index < 1) throw InvalidArgument("multiples closed form: w index below 1");
    Integer scale = v1_class == 2 ? Integer(mu - 1) : mu;
    return w_term(static_cast<unsigned>(w_index)) + (scale << (2 * (n - 1)));
}

inline int stated_offset(unsigned v1_class) {
    return static_cast<int>(v1_class) - 1;
}

}  // namespace detail

inline MultiplesSequence multiples_sequence(const OddInteger& u, std::size_t count) {
    if (count < 1) throw InvalidArgument("multiples_sequence: count must be >= 1");
    SiblingSet set(u, MaxIndex{count});

    MultiplesSequence out{u, 0, {}, {}, 0, std::nullopt, std::nullopt};
    const OddInteger v1 = initial_vertex(u);
    out.v1_class = v1.residue();
    out.stated_w_offset = detail::stated_offset(out.v1_class);

    for (const auto& v : set) out.terms.push_back((v.value() - v.residue()) / 3);

    for (std::size_t i = 0; i < count; ++i) {
        const auto n = static_cast<unsigned>(i + 1);
        out.closed_form.push_back(
            detail::multiples_closed_term(out.v1_class, v1.multiple(), n, out.stated_w_offset));
        if (!out.first_disagreement && out.closed_form.back() != out.terms[i])
            out.first_disagreement = i;
    }

    for (int offset : {-1, 0, 1}) {
        bool all = true;
        for (std::size_t i = 1; i < count && all; ++i) {
            const auto n = static_cast<unsigned>(i + 1);
            if (static_cast<int>(n) + offset < 1) {
                all = false;
                break;
            }
            all = detail::multiples_closed_term(out.v1_class, v1.multiple(), n, offset) == out.terms[i];
        }
        if (all && count > 1) {
            out.matched_w_offset = offset;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// adjacent parents

struct AdjacentInitials {
    OddInteger first;   // v_1(u_i)     = 1 + 4 mu_1
    OddInteger second;  // v_1(u_{i+1}) = 3 + 8 mu_1
};

/// For u_i = 1 (mod 3) and its next sibling u_{i+1} = 1 + 4 u_i, returns
/// both initial vertices and checks v_1(u_i) = mu_2(u_{i+1}) and
/// v_1(u_{i+1}) = 1 + 2 v_1(u_i).
inline AdjacentInitials adjacent_initials(const OddInteger& u_i) {
    if (u_i.residue() != 1)
        throw InvalidArgument("adjacent_initials: expected u = 1 (mod 3), got " + u_i.value().str());
    const Integer& mu1 = u_i.multiple();
    OddInteger next_sibling(1 + 4 * u_i.value());
    if (next_sibling.residue() != 2)
        throw InternalInconsistency("adjacent_initials: successor sibling not = 2 (mod 3)");

    OddInteger a = initial_vertex(u_i);
    OddInteger b = initial_vertex(next_sibling);
    if (a.value() != 1 + 4 * mu1 || a.value() != next_sibling.multiple())
        throw InternalInconsistency("adjacent_initials: v_1(u_i) != 1 + 4 mu_1 = mu_2 for u=" +
                                    u_i.value().str());
    if (b.value() != 3 + 8 * mu1 || b.value() != 1 + 2 * a.value())
        throw InternalInconsistency("adjacent_initials: v_1(u_{i+1}) != 3 + 8 mu_1 for u=" +
                                    u_i.value().str());
    return {std::move(a), std::move(b)};
}

}  // namespace collatz
