#pragma once

#include "lexforge/ontology.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

struct Edge {
    std::string source;
    std::string target;
    RelationKind kind{};

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed, kind-labelled graph over synset ids. Nodes are kept sorted;
/// adjacency lists hold (node ordinal, kind) pairs in edge order.
class PolarityGraph {
public:
    struct Arc {
        std::size_t node;
        RelationKind kind;
    };

    PolarityGraph() = default;

    /// Builds from explicit nodes and edges. Duplicate edges are collapsed;
    /// an edge naming an unknown node throws.
    PolarityGraph(std::vector<std::string> nodes, std::vector<Edge> edges, bool symmetrized = false);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool symmetrized() const noexcept { return symmetrized_; }

    std::optional<std::size_t> ordinal(std::string_view id) const;
    const std::vector<Arc>& out(std::size_t node) const { return out_[node]; }
    const std::vector<Arc>& in(std::size_t node) const { return in_[node]; }

private:
    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<Arc>> out_;
    std::vector<std::vector<Arc>> in_;
    bool symmetrized_ = false;
};

/// Every synset becomes a node; each relation whose kind is in `kinds`
/// becomes an edge. With `symmetrize`, the mirrored edge (inverse kind) is added.
PolarityGraph build_graph(const Ontology& ontology, const std::set<RelationKind>& kinds, bool symmetrize = true);

struct SccPartition {
    /// Each component sorted; components ordered by smallest member.
    std::vector<std::vector<std::string>> components;
    std::map<std::string, std::size_t, std::less<>> component_of;
};

/// Kosaraju: finishing order from an iterative DFS on the graph, then
/// component collection by DFS on the transpose in reverse finishing order.
SccPartition kosaraju_scc(const PolarityGraph& graph);

/// Rebuilds the id index of a partition from its component list.
SccPartition make_partition(std::vector<std::vector<std::string>> components);

enum class SizeBucket { one, two_to_five, six_to_ten, eleven_to_fifteen, sixteen_plus };
std::string_view to_string(SizeBucket b) noexcept;
SizeBucket bucket_for(std::size_t component_size) noexcept;

/// Only non-empty buckets appear.
std::map<SizeBucket, std::size_t> scc_histogram(const SccPartition& partition);

/// One id per component of size >= min_size: the lexicographically smallest member.
std::vector<std::string> select_seeds(const SccPartition& partition, std::size_t min_size = 2);

/// As select_seeds, but a uniformly chosen member per component, driven by `rng_seed`.
std::vector<std::string> select_seeds_random(const SccPartition& partition, std::size_t min_size,
                                             std::uint64_t rng_seed);

struct CoverageReport {
    std::vector<std::string> covered;
    std::vector<std::string> uncovered;
    /// Members of components with size >= min_size that the seeds do not reach.
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

CoverageReport check_seed_coverage(const PolarityGraph& graph, const std::vector<std::string>& seeds,
                                   std::size_t min_size = 2);

// JSON artifacts
std::string graph_to_json(const PolarityGraph& graph);
PolarityGraph graph_from_json(std::string_view json);
std::string partition_to_json(const SccPartition& partition);
SccPartition partition_from_json(std::string_view json);
void write_seed_list(const std::vector<std::string>& seeds, const std::filesystem::path& path);
std::vector<std::string> read_seed_list(const std::filesystem::path& path);

} // namespace lexforge
