#pragma once

// Executable checks over explicit finite boxes. Each check returns a
// VerificationReport that embeds the box it ran on, so a pass reads as
// "no counterexample inside these bounds" and nothing more.

#include <algorithm>
#include <array>
#include <iterator>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "collatz/arbor.hpp"
#include "collatz/core.hpp"
#include "collatz/forward.hpp"
#include "collatz/integer.hpp"
#include "collatz/inverse.hpp"

namespace collatz {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers; larger ones become
/// decimal strings.
inline Json json_int(const Integer& x) {
    if (fits_u64(x)) return Json(x.convert_to<std::uint64_t>());
    return Json(x.str());
}

struct VerificationReport {
    std::string check_name;
    Json parameters = Json::object();
    bool passed = true;
    std::optional<Json> counterexample;
    std::uint64_t cases = 0;
    double elapsed_ms = 0.0;
    Json observations = Json::object();
    std::vector<std::string> warnings;

    void fail(Json witness) {
        if (passed) counterexample = std::move(witness);
        passed = false;
    }

    /// elapsed_ms is wall-clock and left out unless asked for, so identical
    /// runs serialize identically.
    Json to_json(bool with_timing = false) const {
        Json j;
        j["check_name"] = check_name;
        j["params"] = parameters;
        j["passed"] = passed;
        j["counterexample"] = counterexample ? *counterexample : Json(nullptr);
        Json stats;
        stats["cases"] = cases;
        if (with_timing) stats["elapsed_ms"] = elapsed_ms;
        j["stats"] = stats;
        if (!observations.empty()) j["observations"] = observations;
        if (!warnings.empty()) j["warnings"] = warnings;
        return j;
    }
};

namespace detail {

class Stopwatch {
public:
    explicit Stopwatch(VerificationReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        report_.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }
    Stopwatch(const Stopwatch&) = delete;
    Stopwatch& operator=(const Stopwatch&) = delete;

private:
    VerificationReport& report_;
    std::chrono::steady_clock::time_point start_;
};

inline VerificationReport make_report(std::string name, Json params) {
    VerificationReport r;
    r.check_name = std::move(name);
    r.parameters = std::move(params);
    return r;
}

/// Odd parents 1 <= u <= bound with u not divisible by 3.
inline std::vector<std::uint64_t> parents_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t u = 1; u <= bound; u += 2)
        if (u % 3 != 0) out.push_back(u);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// base sequences

/// z_{n+1} = 1 + 4 z_n, and w_n is the multiple of z_n with z_n's class
/// equal to the branch n mod 3 selects (n=1 -> 1, n=2 -> 2, n=0 -> 0).
inline VerificationReport check_base_sequences(unsigned up_to) {
    auto rep = detail::make_report("base_sequences", {{"up_to", up_to}});
    detail::Stopwatch sw(rep);
    BaseSequences seq(up_to + 1);
    for (unsigned n = 1; n <= up_to && rep.passed; ++n) {
        ++rep.cases;
        const auto z = decompose(seq.z(n));
        if (seq.z(n + 1) != 1 + 4 * seq.z(n))
            rep.fail({{"n", n}, {"rule", "z_{n+1} = 1 + 4 z_n"}});
        else if (seq.w(n) != z.multiple())
            rep.fail({{"n", n}, {"rule", "w_n = multiple of z_n"}, {"w_n", json_int(seq.w(n))},
                      {"multiple", json_int(z.multiple())}});
        else if (z.residue() != n % 3)
            rep.fail({{"n", n}, {"rule", "class of z_n = n mod 3"}, {"residue", z.residue()}});
        else if (n > 1 && !(seq.w(n - 1) < seq.w(n)))
            rep.fail({{"n", n}, {"rule", "W strictly ascending"}});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// residue cycle of a sibling set

inline VerificationReport check_residue_cycle(const OddInteger& u, std::size_t count) {
    auto rep = detail::make_report("residue_cycle", {{"u", json_int(u.value())}, {"count", count}});
    detail::Stopwatch sw(rep);
    std::optional<unsigned> r;
    std::vector<unsigned> seen;
    for (const auto& v : siblings(u, MaxIndex{count})) {
        if (!r) r = v.residue();
        const unsigned expected = (*r + seen.size()) % 3;
        seen.push_back(v.residue());
        ++rep.cases;
        if (v.residue() != expected && rep.passed)
            rep.fail({{"u", json_int(u.value())}, {"n", seen.size()}, {"v_n", json_int(v.value())},
                      {"observed", v.residue()}, {"expected", expected}});
    }
    rep.observations["residues"] = seen;
    return rep;
}

inline VerificationReport check_residue_cycles(std::uint64_t parent_bound, std::size_t count) {
    auto rep = detail::make_report("residue_cycles", {{"parent_bound", parent_bound}, {"count", count}});
    detail::Stopwatch sw(rep);
    for (auto u : detail::parents_up_to(parent_bound)) {
        auto one = check_residue_cycle(OddInteger(u), count);
        rep.cases += one.cases;
        if (!one.passed) {
            rep.fail(*one.counterexample);
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// sibling formulations, gaps, round trip

/// For n = 1..count: direct division, recurrence from v_1 and the summation
/// form u * sum 2^(...) + v_1 agree, plus the multiple form z_n + 2^e mu.
/// Terms are built incrementally so one parent costs O(count).
inline VerificationReport check_lemma3_forms(const OddInteger& u, std::size_t count) {
    detail::require_parent(u, "check_lemma3_forms");
    auto rep = detail::make_report("sibling_forms", {{"u", json_int(u.value())}, {"count", count}});
    detail::Stopwatch sw(rep);
    const bool class1 = u.residue() == 1;
    const Integer v1 = class1 ? Integer(u.value() + u.multiple()) : Integer((u.value() + u.multiple()) / 2);

    Integer recurrence = v1;
    Integer sum = 0;
    Integer z = 1;
    std::vector<Integer> values;
    for (std::size_t n = 1; n <= count; ++n) {
        const auto e = static_cast<unsigned>(class1 ? 2 * n : 2 * n - 1);
        if (n > 1) {
            recurrence = 1 + 4 * recurrence;
            sum += pow2(static_cast<unsigned>(class1 ? 2 * (n - 1) : 2 * (n - 1) - 1));
            z += pow4(static_cast<unsigned>(n - 1));
        }
        const Integer num = (u.value() << e) - 1;
        const Integer direct = num / 3;
        const Integer closed = u.value() * sum + v1;
        const Integer multiple_form = z + (u.multiple() << e);
        ++rep.cases;
        if (num % 3 != 0 || direct != recurrence || direct != closed || direct != multiple_form) {
            rep.fail({{"u", json_int(u.value())}, {"n", n}, {"direct", json_int(direct)},
                      {"recurrence", json_int(recurrence)}, {"closed_form", json_int(closed)},
                      {"multiple_form", json_int(multiple_form)}});
            break;
        }
        if (values.size() < 8) values.push_back(direct);
    }
    Json prefix = Json::array();
    for (const auto& v : values) prefix.push_back(json_int(v));
    rep.observations["prefix"] = prefix;
    return rep;
}

inline VerificationReport check_lemma3_box(std::uint64_t parent_bound, std::size_t count) {
    auto rep = detail::make_report("sibling_forms_box", {{"parent_bound", parent_bound}, {"count", count}});
    detail::Stopwatch sw(rep);
    for (auto u : detail::parents_up_to(parent_bound)) {
        auto one = check_lemma3_forms(OddInteger(u), count);
        rep.cases += one.cases;
        if (!one.passed) {
            rep.fail(*one.counterexample);
            break;
        }
    }
    return rep;
}

/// Four-way agreement of v_n (direct, multiple form, recurrence, closed
/// form) on random parents, using the per-index functions of the inverse
/// module. Also checks the residue cycle and the closed-form gap.
inline VerificationReport check_formulations(std::size_t samples, std::uint64_t max_parent, unsigned max_n,
                                             std::uint64_t seed = 20240229) {
    auto rep = detail::make_report("formulations", {{"samples", samples}, {"max_parent", max_parent},
                                                    {"max_n", max_n}, {"seed", seed}});
    detail::Stopwatch sw(rep);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, (max_parent - 1) / 2);
    std::size_t drawn = 0;
    while (drawn < samples && rep.passed) {
        const std::uint64_t candidate = 2 * pick(rng) + 1;
        if (candidate % 3 == 0) continue;
        ++drawn;
        const OddInteger u(candidate);
        Integer prev;
        std::optional<unsigned> r1;
        for (unsigned n = 1; n <= max_n; ++n) {
            ++rep.cases;
            const auto forms = branch_forms(u, n);
            if (!forms.agree()) {
                rep.fail({{"u", candidate}, {"n", n}, {"direct", json_int(forms.direct)},
                          {"multiple_form", json_int(forms.multiple_form)},
                          {"recurrence", json_int(forms.recurrence)},
                          {"closed_form", json_int(forms.closed_form)}});
                break;
            }
            const unsigned r = mod3(forms.direct);
            if (!r1) r1 = r;
            if (r != (*r1 + n - 1) % 3) {
                rep.fail({{"u", candidate}, {"n", n}, {"rule", "residue cycle"}, {"residue", r}});
                break;
            }
            if (n > 1) {
                const unsigned e = branch_exponent(u, n - 1);
                if (forms.direct - prev != (u.value() << e)) {
                    rep.fail({{"u", candidate}, {"n", n - 1}, {"rule", "gap v_{n+1} - v_n"}});
                    break;
                }
            }
            prev = forms.direct;
        }
    }
    return rep;
}

/// f(g_n(u)) = u with a(g_n(u)) equal to the branch exponent, for every
/// parent u <= parent_bound and n <= max_n.
inline VerificationReport check_round_trip(std::uint64_t parent_bound, unsigned max_n) {
    auto rep = detail::make_report("round_trip", {{"parent_bound", parent_bound}, {"max_n", max_n}});
    detail::Stopwatch sw(rep);
    for (auto uv : detail::parents_up_to(parent_bound)) {
        const OddInteger u(uv);
        for (unsigned n = 1; n <= max_n; ++n) {
            ++rep.cases;
            const auto v = g_branch(u, n);
            const auto back = f_step(v);
            const unsigned e = branch_exponent(u, n);
            if (back.next != u || back.exponent != e) {
                rep.fail({{"u", uv}, {"n", n}, {"v", json_int(v.value())},
                          {"f(v)", json_int(back.next.value())}, {"a", back.exponent}, {"e", e}});
                return rep;
            }
        }
    }
    return rep;
}

/// Residue of the image: f(x) = 2 (mod 3) for x = 3, 7, 11 (mod 12).
inline VerificationReport check_image_residue(std::uint64_t bound) {
    auto rep = detail::make_report("image_residue", {{"bound", bound}});
    detail::Stopwatch sw(rep);
    for (std::uint64_t x = 3; x <= bound; x += 4) {  // x = 3 (mod 4) is x = 3, 7, 11 (mod 12)
        ++rep.cases;
        const auto y = f_step_fast(x).first;
        if (y % 3 != 2) {
            rep.fail({{"x", x}, {"f(x)", y}});
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// multiples and adjacent parents

/// Multiples of each sibling set strictly ascend, and the piecewise closed
/// form is compared term by term. The w-index offset that matched is
/// recorded per class of v_1.
inline VerificationReport check_multiples(std::uint64_t parent_bound, std::size_t count) {
    auto rep = detail::make_report("multiples", {{"parent_bound", parent_bound}, {"count", count}});
    detail::Stopwatch sw(rep);
    std::array<std::optional<int>, 3> matched{};
    std::array<int, 3> stated{-1, 0, 1};
    for (auto uv : detail::parents_up_to(parent_bound)) {
        auto seq = multiples_sequence(OddInteger(uv), count);
        rep.cases += seq.terms.size();
        if (!seq.strictly_ascending()) {
            rep.fail({{"u", uv}, {"rule", "strict ascent"}});
            break;
        }
        if (!seq.closed_form_agrees()) {
            const auto i = *seq.first_disagreement;
            rep.fail({{"u", uv}, {"rule", "closed form"}, {"v1_class", seq.v1_class}, {"n", i + 1},
                      {"m_n", json_int(seq.terms[i])}, {"closed_form", json_int(seq.closed_form[i])}});
            break;
        }
        auto& slot = matched[seq.v1_class];
        if (seq.matched_w_offset && !slot) slot = seq.matched_w_offset;
    }
    Json offsets = Json::object();
    for (unsigned c = 0; c < 3; ++c) {
        Json e;
        e["stated"] = stated[c];
        e["matched"] = matched[c] ? Json(*matched[c]) : Json(nullptr);
        offsets["v1_class_" + std::to_string(c)] = e;
    }
    rep.observations["w_offsets"] = offsets;
    return rep;
}

inline VerificationReport check_adjacent_initials(std::uint64_t parent_bound) {
    auto rep = detail::make_report("adjacent_initials", {{"parent_bound", parent_bound}});
    detail::Stopwatch sw(rep);
    for (std::uint64_t u = 1; u <= parent_bound; u += 6) {  // odd and = 1 (mod 3)
        ++rep.cases;
        try {
            adjacent_initials(OddInteger(u));
        } catch (const InternalInconsistency& e) {
            rep.fail({{"u", u}, {"error", e.what()}});
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// collision parity

/// Offset d = m - n between the sibling indices of two hypothetical equal
/// vertices and the multiple of the second parent (mu_2 when the parents
/// differ in class, nu_1 when both are class 1).
struct CollisionProbe {
    unsigned d = 1;
    Integer partner_multiple = 0;
    bool same_class = false;
};

struct CollisionParity {
    Integer required_mu1;
    bool is_odd;
};

/// The mu_1 that a collision v_n = v_m would force:
///   mixed classes: mu_1 = 2^(2d-1) mu_2 + sum_{i=1}^{d} 2^(2(i-1))
///   same class:    mu_1 = 2^(2d)   nu_1 + sum_{i=1}^{d} 2^(2(i-1))
/// A real class-1 multiple is even, so an odd result rules the collision out.
inline CollisionParity check_collision_parity(const CollisionProbe& probe) {
    if (probe.d < 1) throw InvalidArgument("collision probe: d must be >= 1");
    if (probe.partner_multiple < 0) throw InvalidArgument("collision probe: negative multiple");
    const bool partner_odd = is_odd(probe.partner_multiple);
    if (probe.same_class && partner_odd)
        throw InvalidArgument("collision probe: nu_1 must be even");
    if (!probe.same_class && !partner_odd)
        throw InvalidArgument("collision probe: mu_2 must be odd");

    Integer sum = 0;
    for (unsigned i = 1; i <= probe.d; ++i) sum += pow2(2 * (i - 1));
    const unsigned shift = probe.same_class ? 2 * probe.d : 2 * probe.d - 1;
    Integer mu1 = (probe.partner_multiple << shift) + sum;
    const bool odd = is_odd(mu1);
    return {std::move(mu1), odd};
}

inline VerificationReport check_collision_parity_box(unsigned max_d, std::size_t partners) {
    auto rep = detail::make_report("collision_parity", {{"max_d", max_d}, {"partners", partners}});
    detail::Stopwatch sw(rep);
    for (unsigned d = 1; d <= max_d && rep.passed; ++d) {
        for (std::size_t k = 0; k < partners && rep.passed; ++k) {
            for (bool same : {false, true}) {
                CollisionProbe probe{d, Integer(same ? 2 * k : 2 * k + 1), same};
                const auto res = check_collision_parity(probe);
                ++rep.cases;
                if (!res.is_odd) {
                    rep.fail({{"d", d}, {"partner_multiple", json_int(probe.partner_multiple)},
                              {"same_class", same}, {"required_mu1", json_int(res.required_mu1)}});
                    break;
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// tree checks

namespace detail {

inline Json tree_params(const TruncatedArborescence& tree) {
    const auto& c = tree.config();
    return {{"max_depth", c.max_depth ? Json(*c.max_depth) : Json(nullptr)},
            {"value_bound", c.value_bound},
            {"sibling_cap", c.sibling_cap ? Json(*c.sibling_cap) : Json(nullptr)},
            {"nodes", tree.size()}};
}

}  // namespace detail

/// Independent re-enumeration of every stored parent's in-box children,
/// using the direct (2^e u - 1) / 3 form. Passes iff no value repeats and
/// the re-enumerated set equals the stored set.
inline VerificationReport check_uniqueness(const TruncatedArborescence& tree) {
    auto rep = detail::make_report("uniqueness", detail::tree_params(tree));
    detail::Stopwatch sw(rep);
    const auto& c = tree.config();
    const std::uint64_t bound = c.value_bound;

    std::vector<std::uint64_t> values{1};
    for (const auto& p : tree.nodes()) {
        if (p.is_leaf || (c.max_depth && p.depth >= *c.max_depth)) continue;
        const OddInteger u(p.value);
        for (unsigned n = 1; !c.sibling_cap || n <= *c.sibling_cap; ++n) {
            const unsigned e = branch_exponent(u, n);
            if (e >= 64) break;
            const unsigned __int128 scaled = static_cast<unsigned __int128>(p.value) << e;
            if (scaled > static_cast<unsigned __int128>(bound) * 3 + 1) break;  // v_n > bound
            const auto v = static_cast<std::uint64_t>((scaled - 1) / 3);
            if (p.value == 1 && n == 1) continue;
            values.push_back(v);
        }
    }
    rep.cases = values.size();
    std::sort(values.begin(), values.end());
    if (auto it = std::adjacent_find(values.begin(), values.end()); it != values.end()) {
        rep.fail({{"duplicate", *it}});
        return rep;
    }
    if (values.size() != tree.size()) {
        rep.fail({{"rule", "re-enumerated set size equals stored size"},
                  {"re_enumerated", values.size()}, {"stored", tree.size()}});
        return rep;
    }
    for (auto v : values)
        if (!tree.contains(v)) {
            rep.fail({{"rule", "re-enumerated vertex stored"}, {"value", v}});
            break;
        }
    return rep;
}

/// Parent links: every stored child is g_n(parent) at the recorded index,
/// one level below its parent; leaves are exactly the multiples of 3 and
/// have no children; the trivial-cycle edge is absent.
inline VerificationReport check_parent_links(const TruncatedArborescence& tree) {
    auto rep = detail::make_report("parent_links", detail::tree_params(tree));
    detail::Stopwatch sw(rep);
    for (const auto& node : tree.nodes()) {
        ++rep.cases;
        if ((node.value % 3 == 0) != node.is_leaf || node.residue != node.value % 3) {
            rep.fail({{"value", node.value}, {"rule", "leaf flag and residue"}});
            break;
        }
        if (node.is_root()) {
            if (node.value != 1) rep.fail({{"value", node.value}, {"rule", "root is 1"}});
            continue;
        }
        if (node.parent == node.value) {
            rep.fail({{"value", node.value}, {"rule", "trivial cycle excluded"}});
            break;
        }
        const ArborNode* parent = tree.find(node.parent);
        if (!parent || parent->is_leaf || parent->depth + 1 != node.depth) {
            rep.fail({{"value", node.value}, {"parent", node.parent}, {"rule", "parent present, non-leaf, one level up"}});
            break;
        }
        if (g_branch(OddInteger(node.parent), node.sibling_index).value() != node.value) {
            rep.fail({{"value", node.value}, {"parent", node.parent}, {"n", node.sibling_index},
                      {"rule", "g_n(parent) = value"}});
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// covering patterns

/// Residues of H(u) by sibling index: the first term, then a 3-cycle.
/// Class-1 parents are read mod 24, class-2 parents mod 12, keyed by the
/// parent's multiple mod 3.
struct SiblingTemplate {
    unsigned modulus;
    unsigned first;
    std::array<unsigned, 3> cycle;

    unsigned expected(std::size_t n) const { return n == 1 ? first : cycle[(n - 2) % 3]; }
};

inline SiblingTemplate sibling_template(unsigned parent_class, unsigned multiple_mod3) {
    static constexpr SiblingTemplate class1[3] = {
        {24, 1, {5, 21, 13}}, {24, 17, {21, 13, 5}}, {24, 9, {13, 5, 21}}};
    static constexpr SiblingTemplate class2[3] = {
        {12, 7, {5, 9, 1}}, {12, 3, {1, 5, 9}}, {12, 11, {9, 1, 5}}};
    if (parent_class == 1) return class1[multiple_mod3 % 3];
    if (parent_class == 2) return class2[multiple_mod3 % 3];
    throw LeafParentError("sibling_template: leaf class has no siblings");
}

/// Template match for the first `count` siblings of every parent <= bound.
inline VerificationReport check_covering_templates(std::uint64_t parent_bound, std::size_t count) {
    auto rep = detail::make_report("covering_templates", {{"parent_bound", parent_bound}, {"count", count}});
    detail::Stopwatch sw(rep);
    for (auto uv : detail::parents_up_to(parent_bound)) {
        const OddInteger u(uv);
        const auto t = sibling_template(u.residue(), mod3(u.multiple()));
        for (auto it = siblings(u, MaxIndex{count}).begin(); it != std::default_sentinel; ++it) {
            ++rep.cases;
            const unsigned got = static_cast<unsigned>(it->value() % t.modulus);
            if (got != t.expected(it.index())) {
                rep.fail({{"u", uv}, {"n", it.index()}, {"v_n", json_int(it->value())},
                          {"modulus", t.modulus}, {"observed", got}, {"expected", t.expected(it.index())}});
                return rep;
            }
        }
    }
    return rep;
}

/// Covering structure on a built tree:
///  (a) children of class-1 parents are 1, 5 or 9 (mod 12);
///  (b) children of class-2 parents realize all six odd classes mod 12;
///  (c) each stored child matches its parent's sibling template;
///  (d) no value is both a class-1 child and a class-2 child.
inline VerificationReport check_covering(const TruncatedArborescence& tree) {
    auto rep = detail::make_report("covering", detail::tree_params(tree));
    detail::Stopwatch sw(rep);
    std::vector<std::uint64_t> part1;
    std::vector<std::uint64_t> part2;
    std::array<bool, 12> realized2{};
    std::array<bool, 3> parent_mu_classes1{};
    std::array<bool, 3> parent_mu_classes2{};

    for (const auto& node : tree.nodes()) {
        if (node.is_root()) continue;
        ++rep.cases;
        const OddInteger parent(node.parent);
        const unsigned mu_mod3 = mod3(parent.multiple());
        const auto t = sibling_template(parent.residue(), mu_mod3);
        const unsigned got = static_cast<unsigned>(node.value % t.modulus);
        if (got != t.expected(node.sibling_index)) {
            rep.fail({{"part", "c"}, {"parent", node.parent}, {"value", node.value},
                      {"n", node.sibling_index}, {"observed", got}, {"expected", t.expected(node.sibling_index)}});
            break;
        }
        if (parent.residue() == 1) {
            parent_mu_classes1[mu_mod3] = true;
            part1.push_back(node.value);
            const auto r12 = node.value % 12;
            if (r12 != 1 && r12 != 5 && r12 != 9) {
                rep.fail({{"part", "a"}, {"value", node.value}, {"mod12", r12}});
                break;
            }
        } else {
            parent_mu_classes2[mu_mod3] = true;
            part2.push_back(node.value);
            realized2[node.value % 12] = true;
        }
    }

    Json realized = Json::array();
    for (unsigned r = 1; r < 12; r += 2)
        if (realized2[r]) realized.push_back(r);
    rep.observations["class2_children_mod12"] = realized;
    rep.observations["class1_children"] = part1.size();
    rep.observations["class2_children"] = part2.size();

    if (rep.passed && realized.size() != 6)
        rep.fail({{"part", "b"}, {"realized_mod12", realized}});

    if (rep.passed) {
        std::sort(part1.begin(), part1.end());
        std::sort(part2.begin(), part2.end());
        std::vector<std::uint64_t> both;
        std::set_intersection(part1.begin(), part1.end(), part2.begin(), part2.end(), std::back_inserter(both));
        if (!both.empty()) rep.fail({{"part", "d"}, {"value", both.front()}});
    }

    for (unsigned m = 0; m < 3; ++m) {
        if (!parent_mu_classes1[m])
            rep.warnings.push_back("insufficient sample: no class-1 parent with multiple = " +
                                   std::to_string(m) + " (mod 3)");
        if (!parent_mu_classes2[m])
            rep.warnings.push_back("insufficient sample: no class-2 parent with multiple = " +
                                   std::to_string(m) + " (mod 3)");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// initial vertices

/// v_1 = 1 (mod 8) for class-1 parents, v_1 = 3 (mod 4) for class-2
/// parents. The two residue forms cannot meet since 1 (mod 8) is 1 (mod 4).
inline VerificationReport check_initial_vertex_partition(std::uint64_t parent_bound) {
    if (parent_bound < 7) throw InvalidArgument("initial vertex partition: parent_bound must be >= 7");
    auto rep = detail::make_report("initial_vertex_partition", {{"parent_bound", parent_bound}});
    detail::Stopwatch sw(rep);
    std::vector<std::uint64_t> initials1;
    std::vector<std::uint64_t> initials2;
    for (auto uv : detail::parents_up_to(parent_bound)) {
        ++rep.cases;
        const OddInteger u(uv);
        const auto v1 = to_u64(initial_vertex(u).value());
        const bool ok = u.residue() == 1 ? v1 % 8 == 1 : v1 % 4 == 3;
        if (!ok) {
            rep.fail({{"u", uv}, {"v1", v1}, {"class", u.residue()}});
            return rep;
        }
        (u.residue() == 1 ? initials1 : initials2).push_back(v1);
    }
    // both lists ascend with u, so a merge finds any shared initial vertex
    std::vector<std::uint64_t> shared;
    std::set_intersection(initials1.begin(), initials1.end(), initials2.begin(), initials2.end(),
                          std::back_inserter(shared));
    if (!shared.empty()) rep.fail({{"rule", "initial vertices of the two classes disjoint"}, {"v1", shared.front()}});
    rep.observations["class1_parents"] = initials1.size();
    rep.observations["class2_parents"] = initials2.size();
    return rep;
}

// ---------------------------------------------------------------------------
// convergence

/// Every odd x <= bound reaches 1 within max_steps, and every reversed step
/// is a valid inverse branch: with y = f(x) and exponent a, the index n
/// implied by a is admissible for y's class and (2^a y - 1) / 3 = x.
inline VerificationReport check_convergence(std::uint64_t bound, std::size_t max_steps = kDefaultMaxSteps) {
    if (bound < 1) throw InvalidArgument("convergence: bound must be >= 1");
    auto rep = detail::make_report("convergence", {{"bound", bound}, {"max_steps", max_steps}});
    detail::Stopwatch sw(rep);
    std::size_t max_seen = 0;
    std::uint64_t argmax_steps = 1;
    std::uint64_t peak = 1;
    std::uint64_t argmax_peak = 1;
    for (std::uint64_t start = 1; start <= bound && rep.passed; start += 2) {
        ++rep.cases;
        std::uint64_t x = start;
        std::size_t steps = 0;
        while (x != 1 && steps < max_steps) {
            const auto [y, a] = f_step_fast(x);
            const unsigned yr = static_cast<unsigned>(y % 3);
            const bool parity_ok = yr == 1 ? a % 2 == 0 : (yr == 2 && a % 2 == 1);
            if (!parity_ok || a >= 64 || ((y << a) - 1) % 3 != 0 || ((y << a) - 1) / 3 != x) {
                rep.fail({{"start", start}, {"x", x}, {"f(x)", y}, {"a", a}, {"rule", "reversed step is a g branch"}});
                break;
            }
            x = y;
            ++steps;
            if (x > peak) {
                peak = x;
                argmax_peak = start;
            }
        }
        if (!rep.passed) break;
        if (x != 1) {
            rep.fail({{"start", start}, {"rule", "reached 1 within max_steps"}});
            break;
        }
        if (steps > max_seen) {
            max_seen = steps;
            argmax_steps = start;
        }
    }
    rep.observations["max_odd_steps"] = max_seen;
    rep.observations["argmax_odd_steps"] = argmax_steps;
    rep.observations["max_excursion"] = peak;
    rep.observations["argmax_excursion"] = argmax_peak;
    return rep;
}

// ---------------------------------------------------------------------------
// suites

struct VerifyBox {
    std::size_t count = 64;                  // siblings per parent
    std::uint64_t parent_bound = 10'000;
    unsigned max_d = 64;
    std::size_t partners = 1'000;
    std::uint64_t convergence_bound = 100'000;
    std::size_t max_steps = kDefaultMaxSteps;
    std::uint32_t tree_depth = 20;
    std::uint64_t tree_bound = 1'000'000;
    std::size_t samples = 1'000;             // random parents for formulations
    std::uint64_t sample_max = 1'000'000'000;
    unsigned round_trip_n = 32;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "sequences", "lemma1",  "lemma2",  "lemma3",   "lemma4",      "lemma5",      "formulations",
        "roundtrip", "partition", "covering", "convergence", "tree"};
    return names;
}

/// Runs one named suite, or every suite for "all".
inline std::vector<VerificationReport> run_suite(const std::string& name, const VerifyBox& box) {
    std::vector<VerificationReport> out;
    const bool all = name == "all";
    if (!all && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
        throw InvalidArgument("unknown suite '" + name + "'");
    auto want = [&](const char* s) { return all || name == s; };

    std::optional<TruncatedArborescence> tree;
    auto the_tree = [&]() -> const TruncatedArborescence& {
        if (!tree) {
            TruncationConfig cfg;
            cfg.max_depth = box.tree_depth;
            cfg.value_bound = box.tree_bound;
            tree = build(cfg);
        }
        return *tree;
    };

    if (want("sequences")) out.push_back(check_base_sequences(static_cast<unsigned>(box.count)));
    if (want("lemma1")) out.push_back(check_residue_cycles(box.parent_bound, box.count));
    if (want("lemma2")) out.push_back(check_multiples(box.parent_bound, box.count));
    if (want("lemma3")) out.push_back(check_lemma3_box(box.parent_bound, box.count));
    if (want("lemma4")) out.push_back(check_adjacent_initials(box.parent_bound));
    if (want("lemma5")) {
        out.push_back(check_collision_parity_box(box.max_d, box.partners));
        out.push_back(check_uniqueness(the_tree()));
    }
    if (want("formulations"))
        out.push_back(check_formulations(box.samples, box.sample_max, static_cast<unsigned>(box.count)));
    if (want("roundtrip")) {
        out.push_back(check_round_trip(box.parent_bound, box.round_trip_n));
        out.push_back(check_image_residue(box.parent_bound));
    }
    if (want("partition")) out.push_back(check_initial_vertex_partition(box.parent_bound));
    if (want("covering")) {
        out.push_back(check_covering_templates(box.parent_bound, box.count));
        out.push_back(check_covering(the_tree()));
    }
    if (want("convergence")) out.push_back(check_convergence(box.convergence_bound, box.max_steps));
    if (want("tree")) out.push_back(check_parent_links(the_tree()));
    return out;
}

}  // namespace collatz
