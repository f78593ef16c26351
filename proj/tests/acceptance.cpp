// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. argv[1] is the path to the collatz-arbor binary.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collatz/arbor.hpp"
#include "collatz/core.hpp"
#include "collatz/forward.hpp"
#include "collatz/inverse.hpp"
#include "collatz/verify.hpp"

using namespace collatz;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const char* title, double limit_ms, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (limit_ms > 0 && ms > limit_ms) {
        o.passed = false;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime over limit");
    }
    if (!o.passed) ++failures;
    std::printf("[%s] %2d %-34s %10.3f ms", o.passed ? "PASS" : "FAIL", id, title, ms);
    if (limit_ms > 0) std::printf(" (limit %.0f ms)", limit_ms);
    if (!o.detail.empty()) std::printf("  %s", o.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
}

Outcome from(const VerificationReport& r) {
    if (r.passed) return {true, "cases=" + std::to_string(r.cases)};
    return {false, r.check_name + " counterexample " + r.counterexample->dump()};
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << xs[i];
    return s.str();
}

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    status = ::pclose(pipe);
    return out;
}

TruncatedArborescence make_tree(std::uint32_t depth, std::uint64_t bound) {
    TruncationConfig c;
    c.max_depth = depth;
    c.value_bound = bound;
    return build(c);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "collatz-arbor";

    criterion(1, "sequence fidelity", 1.0, [] {
        std::vector<std::string> z;
        std::vector<std::string> w;
        for (unsigned n = 1; n <= 5; ++n) z.push_back(z_term(n).str());
        for (unsigned n = 1; n <= 6; ++n) w.push_back(w_term(n).str());
        const bool ok = join(z) == "1,5,21,85,341" && join(w) == "0,1,7,28,113,455";
        return Outcome{ok, "z=" + join(z) + " w=" + join(w)};
    });

    criterion(2, "worked examples", 10.0, [] {
        std::vector<std::string> sib;
        for (const auto& v : siblings(OddInteger(5), MaxIndex{3})) sib.push_back(v.value().str());
        const auto t = make_tree(10, 1'000);
        const auto p9 = path_to(t, 9);
        const auto p15 = path_to(t, 15);
        const auto g = g_branch(OddInteger(29), 1).value();
        const bool ok = join(sib) == "3,13,53" && join(p9) == "1,5,13,17,11,7,9" &&
                        join(p15) == "1,5,53,35,23,15" && g == 19;
        return Outcome{ok, "siblings(5)=" + join(sib) + " path(9)=" + join(p9) + " path(15)=" + join(p15) +
                               " g(29)=" + g.str()};
    });

    criterion(3, "inverse-forward round trip", 5'000.0, [] { return from(check_round_trip(10'000, 32)); });

    criterion(4, "four-formulation agreement", 0.0,
              [] { return from(check_formulations(1'000, 1'000'000'000, 64)); });

    criterion(5, "residue cycle and gaps", 0.0, [] {
        // same parents as criterion 4: identical seed and draw rule
        std::mt19937_64 rng(20240229);
        std::uniform_int_distribution<std::uint64_t> pick(0, (1'000'000'000 - 1) / 2);
        std::size_t drawn = 0;
        std::uint64_t cases = 0;
        while (drawn < 1'000) {
            const std::uint64_t c = 2 * pick(rng) + 1;
            if (c % 3 == 0) continue;
            ++drawn;
            const OddInteger u(c);
            auto cyc = check_residue_cycle(u, 64);
            if (!cyc.passed) return from(cyc);
            cases += cyc.cases;
            for (unsigned n = 1; n < 64; ++n) {
                if (sibling_gap(u, n) != (u.value() << branch_exponent(u, n)))
                    return Outcome{false, "gap u=" + std::to_string(c) + " n=" + std::to_string(n)};
                ++cases;
            }
        }
        return Outcome{true, "parents=1000 cases=" + std::to_string(cases)};
    });

    criterion(6, "covering patterns", 0.0, [] {
        auto templates = check_covering_templates(10'000, 64);
        if (!templates.passed) return from(templates);
        auto cov = check_covering(make_tree(6, 1'000'000));
        if (!cov.passed) return from(cov);
        return Outcome{true, "template cases=" + std::to_string(templates.cases) +
                                 " class2 mod 12=" + cov.observations["class2_children_mod12"].dump()};
    });

    criterion(7, "initial-vertex partition", 0.0, [] { return from(check_initial_vertex_partition(100'000)); });

    criterion(8, "collision parity witness", 5'000.0, [] { return from(check_collision_parity_box(64, 1'000)); });

    criterion(9, "uniqueness at scale", 60'000.0, [] {
        const auto t = make_tree(20, 1'000'000);  // build throws on any duplicate
        auto u = check_uniqueness(t);
        if (!u.passed) return from(u);
        return Outcome{true, "nodes=" + std::to_string(t.size())};
    });

    criterion(10, "empirical completeness", 120'000.0, [] {
        const auto s = sweep(1, 10'000);
        if (!s.unconverged.empty()) return Outcome{false, "sweep did not converge"};
        const auto B = s.max_peak;
        const auto K = static_cast<std::uint32_t>(s.max_steps_seen);
        const auto t = make_tree(K, B);
        const auto rep = coverage(t, 10'000);
        if (!rep.missing.empty())
            return Outcome{false, "missing " + std::to_string(rep.missing.size()) + " values, first " +
                                      std::to_string(rep.missing.front())};
        auto conv = check_convergence(100'000);
        if (!conv.passed) return from(conv);
        return Outcome{true, "B=" + std::to_string(B) + " K=" + std::to_string(K) + " nodes=" +
                                 std::to_string(t.size()) + " covered=" + std::to_string(rep.covered_count) +
                                 " convergence max steps=" + conv.observations["max_odd_steps"].dump()};
    });

    criterion(11, "determinism", 0.0, [&cli] {
        const std::string cmd = "'" + cli + "' tree --depth 20 --bound 1000000 --format jsonl";
        int s1 = 0;
        int s2 = 0;
        const auto a = capture(cmd, s1);
        const auto b = capture(cmd, s2);
        if (s1 != 0 || s2 != 0) return Outcome{false, "non-zero exit from " + cmd};
        if (a.empty()) return Outcome{false, "empty output"};
        return Outcome{a == b, "bytes=" + std::to_string(a.size())};
    });

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
