#pragma once

// Command-line front end. run() is the whole program minus main(), so the
// test suite can drive it with captured streams.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage error,
// 3 resource budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>

#include "collatz/arbor.hpp"
#include "collatz/core.hpp"
#include "collatz/forward.hpp"
#include "collatz/integer.hpp"
#include "collatz/inverse.hpp"
#include "collatz/verify.hpp"

namespace collatz::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3 };

inline constexpr const char* kNodeBudgetEnv = "COLLATZ_NODE_BUDGET";

namespace detail {

struct UsageError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

inline Integer number(const std::string& text, const char* what) {
    try {
        return parse_decimal(text);
    } catch (const InvalidArgument&) {
        throw UsageError(std::string(what) + ": expected a decimal integer, got '" + text + "'");
    }
}

inline OddInteger odd_number(const std::string& text, const char* what) {
    Integer x = number(text, what);
    if (x < 1 || !is_odd(x))
        throw UsageError(std::string(what) + ": expected an odd positive integer, got " + x.str());
    return OddInteger(std::move(x));
}

inline std::uint64_t word(const std::string& text, const char* what, std::uint64_t min = 0) {
    Integer x = number(text, what);
    if (!fits_u64(x)) throw UsageError(std::string(what) + ": value too large");
    auto v = x.convert_to<std::uint64_t>();
    if (v < min) throw UsageError(std::string(what) + ": must be >= " + std::to_string(min));
    return v;
}

inline std::size_t node_budget() {
    const char* env = std::getenv(kNodeBudgetEnv);
    if (!env || !*env) return kDefaultNodeBudget;
    return static_cast<std::size_t>(word(env, kNodeBudgetEnv, 1));
}

inline TruncationConfig truncation(const std::optional<std::string>& depth, const std::string& bound,
                                   const std::optional<std::string>& cap) {
    TruncationConfig cfg;
    cfg.value_bound = word(bound, "--bound", 1);
    if (cfg.value_bound > kMaxValueBound) throw UsageError("--bound: must be <= 2^62 - 1");
    if (depth) {
        const auto k = word(*depth, "--depth");
        if (k > std::numeric_limits<std::uint32_t>::max()) throw UsageError("--depth: value too large");
        cfg.max_depth = static_cast<std::uint32_t>(k);
    }
    if (cap) {
        const auto n = word(*cap, "--cap", 1);
        if (n > std::numeric_limits<std::uint32_t>::max()) throw UsageError("--cap: value too large");
        cfg.sibling_cap = static_cast<std::uint32_t>(n);
    }
    cfg.node_budget = node_budget();
    return cfg;
}

inline void print_list(std::ostream& out, const std::vector<std::string>& items, const char* sep) {
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? sep : "") << items[i];
    out << '\n';
}

}  // namespace detail

inline int run(std::span<const std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Forward Collatz map, inverse tree enumeration and lemma checks", "collatz-arbor"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string output = "human";
    app.add_option("--output", output, "human or json")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();

    // trajectory
    std::string traj_x;
    std::string traj_steps = std::to_string(kDefaultMaxSteps);
    auto* traj = app.add_subcommand("trajectory", "Forward orbit of an odd start with division exponents");
    traj->add_option("x", traj_x, "odd start value")->required();
    traj->add_option("--max-steps", traj_steps, "step budget")->capture_default_str();

    // siblings
    std::string sib_u;
    std::optional<std::string> sib_count;
    std::optional<std::string> sib_bound;
    auto* sib = app.add_subcommand("siblings", "Children of a parent in ascending order");
    sib->add_option("u", sib_u, "parent, odd and not divisible by 3")->required();
    auto* count_opt = sib->add_option("--count", sib_count, "number of children");
    auto* bound_opt = sib->add_option("--bound", sib_bound, "largest child value");
    count_opt->excludes(bound_opt);
    bound_opt->excludes(count_opt);

    // tree / export
    std::optional<std::string> tree_depth;
    std::string tree_bound;
    std::optional<std::string> tree_cap;
    std::optional<std::string> tree_format;
    std::optional<std::string> tree_out;
    auto add_tree_flags = [&](CLI::App* sub) {
        sub->add_option("--depth", tree_depth, "maximum depth K (root at 0)");
        sub->add_option("--bound", tree_bound, "value bound B")->required();
        sub->add_option("--cap", tree_cap, "largest sibling index expanded");
        sub->add_option("--format", tree_format, "jsonl, dot or csv")
            ->check(CLI::IsMember({"jsonl", "dot", "csv"}));
        sub->add_option("--out", tree_out, "output file (default stdout)");
    };
    auto* tree = app.add_subcommand("tree", "Build the truncated tree; export it when --format is given");
    add_tree_flags(tree);
    auto* exp = app.add_subcommand("export", "Build the truncated tree and export it (default jsonl)");
    add_tree_flags(exp);

    // verify
    std::string suite = "all";
    VerifyBox box;
    bool timings = false;
    auto* ver = app.add_subcommand("verify", "Run lemma checks over finite boxes");
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    ver->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suites))->capture_default_str();
    ver->add_option("--count", box.count, "siblings per parent")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--parent-bound", box.parent_bound, "largest parent")->capture_default_str()->check(CLI::Range(std::uint64_t{7}, std::uint64_t{1} << 40));
    ver->add_option("--max-d", box.max_d, "largest index offset for collision probes")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--partners", box.partners, "partner multiples per parity class")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--convergence-bound", box.convergence_bound, "largest start for the convergence sweep")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--max-steps", box.max_steps, "step budget per start")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--tree-depth", box.tree_depth, "depth of the audited tree")->capture_default_str();
    ver->add_option("--tree-bound", box.tree_bound, "value bound of the audited tree")->capture_default_str()->check(CLI::Range(std::uint64_t{1}, kMaxValueBound));
    ver->add_option("--samples", box.samples, "random parents for the formulation check")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_flag("--timings", timings, "include elapsed time in reports");

    // cover
    std::string cover_bound;
    std::optional<std::string> cover_depth;
    std::optional<std::string> cover_tree_bound;
    auto* cov = app.add_subcommand("cover", "Which odd values up to a bound the truncated tree reaches");
    cov->add_option("--bound", cover_bound, "report odd values up to B")->required();
    cov->add_option("--depth", cover_depth, "maximum tree depth K");
    cov->add_option("--tree-bound", cover_tree_bound, "value bound of the tree (default B)");

    std::vector<const char*> argv;
    argv.push_back("collatz-arbor");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    const bool json = output == "json";

    try {
        if (*traj) {
            const auto x0 = detail::odd_number(traj_x, "trajectory");
            const auto steps = detail::word(traj_steps, "--max-steps", 1);
            const auto rec = trajectory(x0, steps);
            std::vector<std::string> values;
            std::vector<std::string> exps;
            for (const auto& v : rec.values) values.push_back(v.value().str());
            for (auto a : rec.exponents) exps.push_back(std::to_string(a));
            if (json) {
                Json j;
                j["start"] = json_int(x0.value());
                Json vs = Json::array();
                for (const auto& v : rec.values) vs.push_back(json_int(v.value()));
                j["values"] = vs;
                j["exponents"] = rec.exponents;
                j["k"] = rec.length();
                j["converged"] = rec.converged;
                out << j.dump() << '\n';
            } else {
                detail::print_list(out, values, " -> ");
                out << "a = ";
                detail::print_list(out, exps, ",");
                out << "k = " << rec.length() << (rec.converged ? " (converged)" : " (budget exhausted)") << '\n';
            }
            return kOk;
        }

        if (*sib) {
            const auto u = detail::odd_number(sib_u, "siblings");
            if (u.is_leaf()) throw detail::UsageError("siblings: " + u.value().str() + " is divisible by 3 and has no children");
            if (!sib_count && !sib_bound) throw detail::UsageError("siblings: give --count N or --bound B");
            SiblingStop stop = sib_count ? SiblingStop(MaxIndex{detail::word(*sib_count, "--count", 1)})
                                         : SiblingStop(ValueBound{detail::number(*sib_bound, "--bound")});
            if (sib_bound && std::get<ValueBound>(stop).bound < 1) throw detail::UsageError("--bound: must be >= 1");
            std::vector<std::string> items;
            Json vs = Json::array();
            for (const auto& v : siblings(u, stop)) {
                items.push_back(v.value().str());
                vs.push_back(json_int(v.value()));
            }
            if (json) {
                out << Json{{"parent", json_int(u.value())}, {"siblings", vs}}.dump() << '\n';
            } else {
                detail::print_list(out, items, ", ");
            }
            return kOk;
        }

        if (*tree || *exp) {
            const auto cfg = detail::truncation(tree_depth, tree_bound, tree_cap);
            const auto t = build(cfg);
            std::optional<ExportFormat> format;
            if (tree_format) format = parse_export_format(*tree_format);
            else if (*exp) format = ExportFormat::jsonl;

            if (format) {
                if (tree_out) {
                    std::ofstream file(*tree_out, std::ios::binary);
                    if (!file) throw ExportError("cannot open '" + *tree_out + "' for writing");
                    export_tree(t, *format, file);
                } else {
                    export_tree(t, *format, out);
                }
                if (!tree_out) return kOk;
            }
            const auto sizes = t.level_sizes();
            if (json) {
                out << Json{{"nodes", t.size()}, {"level_sizes", sizes}}.dump() << '\n';
            } else {
                out << "nodes " << t.size() << '\n';
                for (std::size_t k = 0; k < sizes.size(); ++k) out << "level " << k << ": " << sizes[k] << '\n';
            }
            return kOk;
        }

        if (*ver) {
            const auto reports = run_suite(suite, box);
            bool all_passed = true;
            for (const auto& r : reports) {
                all_passed = all_passed && r.passed;
                if (json) {
                    out << r.to_json(timings).dump() << '\n';
                } else {
                    out << (r.passed ? "PASS " : "FAIL ") << r.check_name << "  cases=" << r.cases;
                    if (timings) out << "  elapsed_ms=" << r.elapsed_ms;
                    out << '\n';
                    if (r.counterexample) out << "  counterexample: " << r.counterexample->dump() << '\n';
                    if (!r.observations.empty()) out << "  observations: " << r.observations.dump() << '\n';
                    for (const auto& w : r.warnings) out << "  warning: " << w << '\n';
                }
            }
            return all_passed ? kOk : kCheckFailed;
        }

        if (*cov) {
            const auto bound = detail::word(cover_bound, "--bound", 1);
            const auto cfg = detail::truncation(cover_depth, cover_tree_bound ? *cover_tree_bound : cover_bound, std::nullopt);
            if (cfg.value_bound < bound) throw detail::UsageError("--tree-bound must be >= --bound");
            const auto t = build(cfg);
            const auto rep = coverage(t, bound);
            if (json) {
                out << Json{{"bound", bound},
                            {"covered", rep.covered_count},
                            {"total", rep.total()},
                            {"missing", rep.missing},
                            {"level_sizes", rep.level_sizes}}
                           .dump()
                    << '\n';
            } else {
                out << "bound " << bound << '\n'
                    << "covered " << rep.covered_count << " of " << rep.total() << " odd values\n";
                std::vector<std::string> miss;
                for (auto m : rep.missing) miss.push_back(std::to_string(m));
                out << "missing (" << miss.size() << "): ";
                detail::print_list(out, miss, " ");
                for (std::size_t k = 0; k < rep.level_sizes.size(); ++k)
                    out << "depth " << k << ": " << rep.level_sizes[k] << '\n';
            }
            return kOk;
        }
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}

}  // namespace collatz::cli
