#include "lexforge/seedgraph.hpp"

#include "lexforge/error.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <random>
#include <utility>

namespace lexforge {

using nlohmann::ordered_json;

PolarityGraph::PolarityGraph(std::vector<std::string> nodes, std::vector<Edge> edges, bool symmetrized)
    : nodes_(std::move(nodes)), symmetrized_(symmetrized) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    for (const auto& e : edges_) {
        auto s = ordinal(e.source);
        auto t = ordinal(e.target);
        if (!s || !t) throw Error("edge " + e.source + " -> " + e.target + " names an unknown node");
        out_[*s].push_back({*t, e.kind});
        in_[*t].push_back({*s, e.kind});
    }
}

std::optional<std::size_t> PolarityGraph::ordinal(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

PolarityGraph build_graph(const Ontology& ontology, const std::set<RelationKind>& kinds, bool symmetrize) {
    if (kinds.empty()) throw Error("build_graph needs at least one relation kind");
    std::vector<Edge> edges;
    for (const auto& [id, s] : ontology) {
        for (const auto& r : s.relations) {
            if (!kinds.contains(r.kind)) continue;
            edges.push_back({id, r.target, r.kind});
            if (symmetrize) edges.push_back({r.target, id, inverse(r.kind)});
        }
    }
    return PolarityGraph(ontology.ids(), std::move(edges), symmetrize);
}

SccPartition make_partition(std::vector<std::vector<std::string>> components) {
    SccPartition p;
    for (auto& c : components) std::sort(c.begin(), c.end());
    std::erase_if(components, [](const auto& c) { return c.empty(); });
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    p.components = std::move(components);
    for (std::size_t i = 0; i < p.components.size(); ++i)
        for (const auto& id : p.components[i])
            if (!p.component_of.emplace(id, i).second) throw Error("id " + id + " appears in two components");
    return p;
}

SccPartition kosaraju_scc(const PolarityGraph& graph) {
    const std::size_t n = graph.size();
    std::vector<std::size_t> finish;
    finish.reserve(n);
    std::vector<char> seen(n, 0);

    // (node, next arc) frames for the first pass
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto& arcs = graph.out(node);
            if (next < arcs.size()) {
                auto succ = arcs[next++].node;
                if (!seen[succ]) {
                    seen[succ] = 1;
                    stack.push_back({succ, 0});
                }
            } else {
                finish.push_back(node);
                stack.pop_back();
            }
        }
    }

    std::vector<std::vector<std::string>> components;
    std::vector<char> assigned(n, 0);
    std::vector<std::size_t> work;
    for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
        if (assigned[*it]) continue;
        std::vector<std::string> comp;
        assigned[*it] = 1;
        work.push_back(*it);
        while (!work.empty()) {
            auto node = work.back();
            work.pop_back();
            comp.push_back(graph.nodes()[node]);
            for (const auto& arc : graph.in(node)) {
                if (!assigned[arc.node]) {
                    assigned[arc.node] = 1;
                    work.push_back(arc.node);
                }
            }
        }
        components.push_back(std::move(comp));
    }
    return make_partition(std::move(components));
}

std::string_view to_string(SizeBucket b) noexcept {
    switch (b) {
    case SizeBucket::one: return "1";
    case SizeBucket::two_to_five: return "2-5";
    case SizeBucket::six_to_ten: return "6-10";
    case SizeBucket::eleven_to_fifteen: return "11-15";
    case SizeBucket::sixteen_plus: return "16+";
    }
    return "1";
}

SizeBucket bucket_for(std::size_t size) noexcept {
    if (size <= 1) return SizeBucket::one;
    if (size <= 5) return SizeBucket::two_to_five;
    if (size <= 10) return SizeBucket::six_to_ten;
    if (size <= 15) return SizeBucket::eleven_to_fifteen;
    return SizeBucket::sixteen_plus;
}

std::map<SizeBucket, std::size_t> scc_histogram(const SccPartition& partition) {
    std::map<SizeBucket, std::size_t> h;
    for (const auto& c : partition.components) ++h[bucket_for(c.size())];
    return h;
}

std::vector<std::string> select_seeds(const SccPartition& partition, std::size_t min_size) {
    if (min_size < 1) throw Error("min_size must be >= 1");
    std::vector<std::string> seeds;
    for (const auto& c : partition.components)
        if (c.size() >= min_size) seeds.push_back(*std::min_element(c.begin(), c.end()));
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

std::vector<std::string> select_seeds_random(const SccPartition& partition, std::size_t min_size,
                                             std::uint64_t rng_seed) {
    if (min_size < 1) throw Error("min_size must be >= 1");
    // mt19937_64 output is fixed by the standard; plain modulo keeps the
    // choice portable across standard libraries (distributions are not).
    std::mt19937_64 rng(rng_seed);
    std::vector<std::string> seeds;
    for (const auto& c : partition.components) {
        if (c.size() < min_size) continue;
        auto sorted = c;
        std::sort(sorted.begin(), sorted.end());
        seeds.push_back(sorted[rng() % sorted.size()]);
    }
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

CoverageReport check_seed_coverage(const PolarityGraph& graph, const std::vector<std::string>& seeds,
                                   std::size_t min_size) {
    std::vector<char> reached(graph.size(), 0);
    std::deque<std::size_t> queue;
    for (const auto& s : seeds) {
        auto o = graph.ordinal(s);
        if (!o) throw Error("seed id " + s + " is not a graph node");
        if (!reached[*o]) {
            reached[*o] = 1;
            queue.push_back(*o);
        }
    }
    while (!queue.empty()) {
        auto node = queue.front();
        queue.pop_front();
        for (const auto& arc : graph.out(node)) {
            if (!reached[arc.node]) {
                reached[arc.node] = 1;
                queue.push_back(arc.node);
            }
        }
    }

    auto partition = kosaraju_scc(graph);
    CoverageReport report;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        const auto& id = graph.nodes()[i];
        if (reached[i]) {
            report.covered.push_back(id);
            continue;
        }
        report.uncovered.push_back(id);
        if (partition.components[partition.component_of.find(id)->second].size() >= min_size)
            report.violations.push_back(id);
    }
    return report;
}

std::string graph_to_json(const PolarityGraph& graph) {
    ordered_json j;
    j["symmetrized"] = graph.symmetrized();
    j["nodes"] = graph.nodes();
    auto edges = ordered_json::array();
    for (const auto& e : graph.edges())
        edges.push_back(ordered_json{{"source", e.source}, {"target", e.target}, {"kind", to_string(e.kind)}});
    j["edges"] = std::move(edges);
    return j.dump(1) + "\n";
}

PolarityGraph graph_from_json(std::string_view json) {
    try {
        auto j = ordered_json::parse(json);
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            auto kind = parse_relation_kind(e.at("kind").get<std::string>());
            if (!kind) throw Error("unknown relation kind in graph file");
            edges.push_back({e.at("source").get<std::string>(), e.at("target").get<std::string>(), *kind});
        }
        return PolarityGraph(j.at("nodes").get<std::vector<std::string>>(), std::move(edges),
                             j.value("symmetrized", false));
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("malformed graph file: ") + e.what());
    }
}

std::string partition_to_json(const SccPartition& partition) {
    ordered_json j;
    auto hist = ordered_json::object();
    for (const auto& [bucket, count] : scc_histogram(partition)) hist[std::string(to_string(bucket))] = count;
    j["histogram"] = std::move(hist);
    j["components"] = partition.components;
    return j.dump(1) + "\n";
}

SccPartition partition_from_json(std::string_view json) {
    try {
        auto j = ordered_json::parse(json);
        return make_partition(j.at("components").get<std::vector<std::vector<std::string>>>());
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("malformed partition file: ") + e.what());
    }
}

void write_seed_list(const std::vector<std::string>& seeds, const std::filesystem::path& path) {
    std::string out;
    for (const auto& s : seeds) out += s + "\n";
    text::write_file(path, out);
}

std::vector<std::string> read_seed_list(const std::filesystem::path& path) {
    std::vector<std::string> out;
    for (const auto& line : text::lines(text::read_file(path))) {
        auto t = text::trim(line);
        if (!t.empty() && t.front() != '#') out.emplace_back(t);
    }
    return out;
}

} // namespace lexforge
