#pragma once

// Bounded materialization of the inverse Collatz tree rooted at 1.
//
// Level 0 is the root. Level k+1 is the union of the sibling sets of the
// non-leaf vertices at level k, enumerated parent by parent in level order
// and, within a parent, by sibling index. A vertex is stored iff its value
// is <= value_bound and its depth is <= max_depth; because sibling sets are
// strictly ascending the value cutoff loses nothing inside the box.
//
// The trivial cycle edge (1, 1) is never stored, so level 1 is {5, 21, 85, ...}.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/forward.hpp"
#include "collatz/integer.hpp"
#include "collatz/inverse.hpp"

namespace collatz {

/// A repeated vertex. Would falsify uniqueness of vertices in the tree.
class DuplicateVertexError : public Error {
public:
    DuplicateVertexError(std::uint64_t value, std::uint64_t first_parent, std::uint64_t second_parent)
        : Error("duplicate vertex " + std::to_string(value) + " reached from parents " +
                std::to_string(first_parent) + " and " + std::to_string(second_parent)),
          value_(value) {}
    std::uint64_t value() const noexcept { return value_; }

private:
    std::uint64_t value_;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class NonEdgeError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ExportError : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t kDefaultNodeBudget = 10'000'000;
/// Keeps 4v + 1 inside 64 bits for every stored v.
inline constexpr std::uint64_t kMaxValueBound = (std::uint64_t{1} << 62) - 1;

struct TruncationConfig {
    std::optional<std::uint32_t> max_depth;  // nullopt: limited by value_bound only
    std::uint64_t value_bound = 1;
    std::optional<std::uint32_t> sibling_cap;
    std::size_t node_budget = kDefaultNodeBudget;

    void validate() const {
        if (value_bound < 1) throw InvalidArgument("value bound must be >= 1");
        if (value_bound > kMaxValueBound)
            throw InvalidArgument("value bound exceeds 2^62 - 1");
        if (sibling_cap && *sibling_cap < 1) throw InvalidArgument("sibling cap must be >= 1");
        if (node_budget < 1) throw InvalidArgument("node budget must be >= 1");
    }
};

struct ArborNode {
    std::uint64_t value = 0;
    std::uint64_t parent = 0;         // 0 for the root
    std::uint32_t depth = 0;
    std::uint32_t sibling_index = 0;  // n with g_n(parent) = value; 0 for the root
    std::uint8_t residue = 0;
    bool is_leaf = false;

    bool is_root() const noexcept { return depth == 0; }
};

namespace detail {

// Insert-if-absent set of odd values <= bound. Bit-packed when the odd
// range is small enough, hashed otherwise.
class VisitedSet {
public:
    static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 27;

    explicit VisitedSet(std::uint64_t bound) {
        const std::uint64_t slots = bound / 2 + 1;
        if (slots <= kDenseLimit) dense_.assign(slots, false);
    }

    bool insert(std::uint64_t odd) {
        if (!dense_.empty()) {
            auto bit = dense_[odd / 2];
            if (bit) return false;
            bit = true;
            return true;
        }
        return sparse_.insert(odd).second;
    }

private:
    std::vector<bool> dense_;
    std::unordered_set<std::uint64_t> sparse_;
};

}  // namespace detail

class TruncatedArborescence {
public:
    const TruncationConfig& config() const noexcept { return config_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const ArborNode> nodes() const noexcept { return nodes_; }

    /// Number of non-empty levels, root included.
    std::size_t level_count() const noexcept { return level_offsets_.size() - 1; }

    std::span<const ArborNode> level(std::size_t k) const {
        if (k >= level_count()) return {};
        return std::span<const ArborNode>(nodes_).subspan(
            level_offsets_[k], level_offsets_[k + 1] - level_offsets_[k]);
    }

    std::vector<std::size_t> level_sizes() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < level_count(); ++k) out.push_back(level(k).size());
        return out;
    }

    const ArborNode* find(std::uint64_t value) const {
        auto it = std::lower_bound(index_.begin(), index_.end(), value,
                                   [](const auto& e, std::uint64_t v) { return e.first < v; });
        if (it == index_.end() || it->first != value) return nullptr;
        return &nodes_[it->second];
    }

    bool contains(std::uint64_t value) const { return find(value) != nullptr; }

private:
    friend TruncatedArborescence build(const TruncationConfig& config);

    TruncationConfig config_;
    std::vector<ArborNode> nodes_;
    std::vector<std::size_t> level_offsets_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> index_;
};

/// Breadth-first expansion from 1 inside the truncation box. Throws
/// DuplicateVertexError if any value is reached twice and CapacityError
/// once more than node_budget vertices would be stored.
inline TruncatedArborescence build(const TruncationConfig& config) {
    config.validate();
    const std::uint64_t bound = config.value_bound;

    TruncatedArborescence tree;
    tree.config_ = config;
    auto& nodes = tree.nodes_;
    detail::VisitedSet visited(bound);

    nodes.push_back(ArborNode{1, 0, 0, 0, 1, false});
    visited.insert(1);
    tree.level_offsets_.push_back(0);

    for (std::uint32_t depth = 0;; ++depth) {
        const std::size_t begin = tree.level_offsets_.back();
        const std::size_t end = nodes.size();
        if (config.max_depth && depth >= *config.max_depth) break;

        for (std::size_t i = begin; i < end; ++i) {
            const ArborNode parent = nodes[i];
            if (parent.is_leaf) continue;
            const std::uint64_t u = parent.value;
            std::uint64_t v = parent.residue == 1 ? (4 * u - 1) / 3 : (2 * u - 1) / 3;
            for (std::uint32_t n = 1;; ++n) {
                if (config.sibling_cap && n > *config.sibling_cap) break;
                if (v > bound) break;
                if (!(u == 1 && n == 1)) {
                    if (!visited.insert(v)) {
                        std::uint64_t first_parent = 0;
                        for (const auto& node : nodes)
                            if (node.value == v) first_parent = node.parent;
                        throw DuplicateVertexError(v, first_parent, u);
                    }
                    if (nodes.size() >= config.node_budget)
                        throw CapacityError("tree exceeds node budget of " +
                                            std::to_string(config.node_budget));
                    const auto r = static_cast<std::uint8_t>(v % 3);
                    nodes.push_back(ArborNode{v, u, depth + 1, n, r, r == 0});
                }
                if (v > (bound - 1) / 4) break;  // next sibling 4v + 1 > bound
                v = 4 * v + 1;
            }
        }
        if (nodes.size() == end) break;
        tree.level_offsets_.push_back(end);
    }
    tree.level_offsets_.push_back(nodes.size());

    tree.index_.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        tree.index_.emplace_back(nodes[i].value, static_cast<std::uint32_t>(i));
    std::sort(tree.index_.begin(), tree.index_.end());
    return tree;
}

/// Root-to-target vertex list. Checked against the reversed forward
/// trajectory of the target.
inline std::vector<std::uint64_t> path_to(const TruncatedArborescence& tree, std::uint64_t target) {
    const ArborNode* node = tree.find(target);
    if (!node)
        throw NotFoundError("vertex " + std::to_string(target) +
                            " is not in the truncated tree (absence under truncation is not a counterexample)");
    std::vector<std::uint64_t> path;
    while (true) {
        path.push_back(node->value);
        if (node->is_root()) break;
        node = tree.find(node->parent);
        if (!node) throw InternalInconsistency("path_to: dangling parent link");
    }
    std::reverse(path.begin(), path.end());

    auto orbit = trajectory(OddInteger(target), path.size());
    if (!orbit.converged || orbit.values.size() != path.size())
        throw InternalInconsistency("path_to: forward trajectory length disagrees for " +
                                    std::to_string(target));
    for (std::size_t i = 0; i < path.size(); ++i)
        if (orbit.values[path.size() - 1 - i].value() != path[i])
            throw InternalInconsistency("path_to: path is not the reversed trajectory of " +
                                        std::to_string(target));
    return path;
}

enum class EdgeKind { ascending, descending, lateral };

inline const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::ascending: return "ascending";
        case EdgeKind::descending: return "descending";
        case EdgeKind::lateral: return "lateral";
    }
    return "?";
}

struct EdgeClass {
    EdgeKind kind;
    unsigned sibling_index;
};

/// Orientation of the edge parent -> child on the number line. The only
/// lateral edge is the trivial cycle (1, 1). For initial-vertex edges
/// (n = 1) the orientation is fixed by the parent's class.
inline EdgeClass classify_edge(const OddInteger& parent, const OddInteger& child) {
    if (parent.is_leaf())
        throw NonEdgeError("classify_edge: " + parent.value().str() + " is a leaf");
    auto step = f_step(child);
    if (step.next != parent)
        throw NonEdgeError("classify_edge: " + child.value().str() + " is not a child of " +
                           parent.value().str());
    const auto n = branch_index(parent, step.exponent);
    if (!n) throw InternalInconsistency("classify_edge: exponent parity mismatch");

    EdgeKind kind = child.value() > parent.value()   ? EdgeKind::ascending
                    : child.value() < parent.value() ? EdgeKind::descending
                                                     : EdgeKind::lateral;
    if (*n == 1 && parent.value() > 1) {
        const EdgeKind by_class = parent.residue() == 1 ? EdgeKind::ascending : EdgeKind::descending;
        if (kind != by_class)
            throw InternalInconsistency("classify_edge: initial edge orientation breaks class rule");
    }
    return {kind, *n};
}

struct CoverageReport {
    std::uint64_t bound = 0;
    std::size_t covered_count = 0;
    std::vector<bool> covered;                 // slot (v - 1) / 2 for odd v <= bound
    std::vector<std::uint64_t> missing;        // ascending
    std::vector<std::int32_t> first_depth;     // per slot, -1 if missing
    std::vector<std::size_t> level_sizes;      // covered values by depth

    std::size_t total() const noexcept { return covered.size(); }

    std::optional<std::uint32_t> depth_of(std::uint64_t odd) const {
        if (odd == 0 || odd > bound || !is_odd(odd)) return std::nullopt;
        const auto d = first_depth[(odd - 1) / 2];
        if (d < 0) return std::nullopt;
        return static_cast<std::uint32_t>(d);
    }
};

/// Which odd values <= bound the tree reaches, and at what depth.
inline CoverageReport coverage(const TruncatedArborescence& tree, std::uint64_t bound) {
    if (bound < 1) throw InvalidArgument("coverage: bound must be >= 1");
    if (bound > tree.config().value_bound)
        throw InvalidArgument("coverage: bound " + std::to_string(bound) +
                              " exceeds the tree's value bound " +
                              std::to_string(tree.config().value_bound));
    CoverageReport rep;
    rep.bound = bound;
    const std::uint64_t slots = (bound + 1) / 2;
    rep.covered.assign(slots, false);
    rep.first_depth.assign(slots, -1);
    for (const auto& node : tree.nodes()) {
        if (node.value > bound) continue;
        const std::uint64_t slot = (node.value - 1) / 2;
        rep.covered[slot] = true;
        rep.first_depth[slot] = static_cast<std::int32_t>(node.depth);
        if (rep.level_sizes.size() <= node.depth) rep.level_sizes.resize(node.depth + 1, 0);
        ++rep.level_sizes[node.depth];
        ++rep.covered_count;
    }
    for (std::uint64_t slot = 0; slot < slots; ++slot)
        if (!rep.covered[slot]) rep.missing.push_back(2 * slot + 1);
    return rep;
}

// ---------------------------------------------------------------------------
// export

enum class ExportFormat { jsonl, dot, csv };

inline ExportFormat parse_export_format(std::string_view name) {
    if (name == "jsonl") return ExportFormat::jsonl;
    if (name == "dot") return ExportFormat::dot;
    if (name == "csv") return ExportFormat::csv;
    throw InvalidArgument("unknown export format '" + std::string(name) + "' (jsonl, dot, csv)");
}

/// Deterministic serialization in level order. JSONL and CSV carry
/// value, depth, parent, sibling_index, residue, is_leaf; the root has no
/// parent or sibling index (null in JSONL, empty in CSV).
inline void export_tree(const TruncatedArborescence& tree, ExportFormat format, std::ostream& sink) {
    switch (format) {
        case ExportFormat::jsonl:
            for (const auto& n : tree.nodes()) {
                sink << "{\"value\":" << n.value << ",\"depth\":" << n.depth << ",\"parent\":";
                if (n.is_root()) sink << "null,\"sibling_index\":null";
                else sink << n.parent << ",\"sibling_index\":" << n.sibling_index;
                sink << ",\"residue\":" << unsigned{n.residue}
                     << ",\"is_leaf\":" << (n.is_leaf ? "true" : "false") << "}\n";
            }
            break;
        case ExportFormat::csv:
            sink << "value,depth,parent,sibling_index,residue,is_leaf\n";
            for (const auto& n : tree.nodes()) {
                sink << n.value << ',' << n.depth << ',';
                if (!n.is_root()) sink << n.parent << ',' << n.sibling_index;
                else sink << ',';
                sink << ',' << unsigned{n.residue} << ',' << (n.is_leaf ? "true" : "false") << '\n';
            }
            break;
        case ExportFormat::dot:
            sink << "digraph collatz_arbor {\n"
                 << "  node [shape=ellipse];\n"
                 << "  1 [shape=doublecircle];\n";
            for (const auto& n : tree.nodes())
                if (n.is_leaf) sink << "  " << n.value << " [shape=box, style=filled, fillcolor=lightgray];\n";
            for (const auto& n : tree.nodes())
                if (!n.is_root()) sink << "  " << n.parent << " -> " << n.value << ";\n";
            sink << "}\n";
            break;
    }
    sink.flush();
    if (!sink) throw ExportError("export: write to sink failed");
}

}  // namespace collatz
