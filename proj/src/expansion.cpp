#include "lexforge/expansion.hpp"

#include "lexforge/error.hpp"
#include "lexforge/seedgraph.hpp"
#include "lexforge/text.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace lexforge {

std::uint64_t NGramCounts::unigram(std::string_view t) const {
    auto it = unigrams.find(t);
    return it == unigrams.end() ? 0 : it->second;
}

std::uint64_t NGramCounts::cooccurrence(const std::string& a, const std::string& b) const {
    std::uint64_t total = 0;
    if (auto it = bigrams.find({a, b}); it != bigrams.end()) total += it->second;
    if (a != b)
        if (auto it = bigrams.find({b, a}); it != bigrams.end()) total += it->second;
    return total;
}

namespace {

std::uint64_t parse_count(std::string_view raw, const std::string& source, std::size_t line) {
    raw = text::trim(raw);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size())
        throw ParseError(source, line, "count '" + std::string(raw) + "' is not an integer");
    if (v <= 0) throw ParseError(source, line, "count must be positive, got " + std::string(raw));
    return static_cast<std::uint64_t>(v);
}

} // namespace

NGramCounts load_counts(const std::filesystem::path& unigram_path, const std::filesystem::path& bigram_path) {
    NGramCounts counts;
    std::optional<std::uint64_t> declared_total;

    const auto uni_src = unigram_path.string();
    auto uni = text::lines(text::read_file(unigram_path));
    bool first = true;
    for (std::size_t i = 0; i < uni.size(); ++i) {
        if (text::trim(uni[i]).empty()) continue;
        auto fields = text::split(uni[i], '\t');
        if (fields.size() != 2) throw ParseError(uni_src, i + 1, "expected 'token<TAB>count'");
        if (first && fields[0] == "#total") {
            // a zero-token corpus is representable only through the header
            auto raw = text::trim(fields[1]);
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (ec != std::errc{} || ptr != raw.data() + raw.size())
                throw ParseError(uni_src, i + 1, "total '" + std::string(raw) + "' is not a non-negative integer");
            declared_total = v;
            first = false;
            continue;
        }
        first = false;
        auto token = std::string(text::trim(fields[0]));
        if (token.empty()) throw ParseError(uni_src, i + 1, "empty token");
        counts.unigrams[token] += parse_count(fields[1], uni_src, i + 1);
    }

    const auto bi_src = bigram_path.string();
    auto bi = text::lines(text::read_file(bigram_path));
    for (std::size_t i = 0; i < bi.size(); ++i) {
        if (text::trim(bi[i]).empty()) continue;
        auto fields = text::split(bi[i], '\t');
        if (fields.size() != 2) throw ParseError(bi_src, i + 1, "expected 'token1 token2<TAB>count'");
        auto pair = text::split(text::trim(fields[0]), ' ');
        if (pair.size() != 2 || pair[0].empty() || pair[1].empty())
            throw ParseError(bi_src, i + 1, "bigram field must be two tokens separated by one space");
        counts.bigrams[{pair[0], pair[1]}] += parse_count(fields[1], bi_src, i + 1);
    }

    std::uint64_t sum = 0, max = 0;
    for (const auto& [_, c] : counts.unigrams) {
        sum += c;
        max = std::max(max, c);
    }
    counts.total_tokens = declared_total.value_or(sum);
    if (counts.total_tokens < max)
        throw Error(uni_src + ": total " + std::to_string(counts.total_tokens) + " is below the largest unigram count " +
                    std::to_string(max));
    return counts;
}

std::string_view to_string(PosFilter f) noexcept { return f == PosFilter::all ? "all" : "adjectives"; }

std::string_view to_string(Algorithm a) noexcept { return a == Algorithm::pmi ? "pmi" : "default"; }

std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept {
    if (s == "default") return Algorithm::default_rules;
    if (s == "pmi") return Algorithm::pmi;
    return std::nullopt;
}

std::string_view to_string(LabelSource s) noexcept {
    switch (s) {
    case LabelSource::hand: return "hand";
    case LabelSource::relation_rule: return "relation-rule";
    case LabelSource::pmi: return "pmi";
    }
    return "hand";
}

namespace {

std::optional<LabelSource> parse_source(std::string_view s) noexcept {
    for (auto v : {LabelSource::hand, LabelSource::relation_rule, LabelSource::pmi})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

} // namespace

ExpansionConfig ExpansionConfig::preset(int expansion_case, Algorithm algorithm) {
    ExpansionConfig c;
    c.algorithm = algorithm;
    switch (expansion_case) {
    case 1:
        c.pos_filter = PosFilter::all;
        c.relation_kinds = {RelationKind::antonym};
        break;
    case 2:
        c.pos_filter = PosFilter::adjectives;
        c.relation_kinds = {RelationKind::antonym, RelationKind::hyponym, RelationKind::hypernym};
        break;
    case 3:
        c.pos_filter = PosFilter::adjectives;
        c.relation_kinds = {RelationKind::antonym};
        break;
    default: throw Error("unknown expansion case " + std::to_string(expansion_case) + " (expected 1, 2 or 3)");
    }
    return c;
}

int ExpansionConfig::case_number() const {
    for (int c = 1; c <= 3; ++c) {
        auto p = preset(c);
        if (p.pos_filter == pos_filter && p.relation_kinds == relation_kinds) return c;
    }
    return 0;
}

namespace {

std::string kinds_list(const std::set<RelationKind>& kinds) {
    std::vector<std::string> names;
    for (auto k : kinds) names.emplace_back(to_string(k));
    return text::join(names, ",");
}

} // namespace

std::string ExpansionConfig::describe() const {
    std::ostringstream ss;
    ss << "pos_filter=" << to_string(pos_filter) << " relations=" << kinds_list(relation_kinds)
       << " algorithm=" << to_string(algorithm) << " max_rounds=" << max_rounds
       << " positive_terms=" << text::join(positive_terms, ",") << " negative_terms=" << text::join(negative_terms, ",")
       << " propagate_neutral=" << (propagate_neutral ? "true" : "false");
    return ss.str();
}

LabeledSeed seed_from_gold(const GoldStandard& gold) {
    LabeledSeed seed;
    for (const auto& [id, e] : gold) seed.emplace(id, SeedEntry{e.label, 0, LabelSource::hand});
    return seed;
}

Label implied_label(Label source, RelationKind kind) noexcept {
    if (kind == RelationKind::antonym) return label_from_sign(-signed_value(source));
    return source;
}

std::optional<double> pmi(const std::string& a, const std::string& b, const NGramCounts& counts, LogBase base) {
    const auto ca = counts.unigram(a);
    const auto cb = counts.unigram(b);
    const auto cab = counts.cooccurrence(a, b);
    if (ca == 0 || cb == 0 || cab == 0 || counts.total_tokens == 0) return std::nullopt;
    const double ratio = (static_cast<double>(cab) * static_cast<double>(counts.total_tokens)) /
                         (static_cast<double>(ca) * static_cast<double>(cb));
    return base == LogBase::two ? std::log2(ratio) : std::log(ratio);
}

std::optional<double> so_pmi(const std::string& term, const ExpansionConfig& config, const NGramCounts& counts,
                             LogBase base) {
    double score = 0.0;
    for (const auto& p : config.positive_terms) {
        auto v = pmi(term, p, counts, base);
        if (!v) return std::nullopt;
        score += *v;
    }
    for (const auto& n : config.negative_terms) {
        auto v = pmi(term, n, counts, base);
        if (!v) return std::nullopt;
        score -= *v;
    }
    return score;
}

std::optional<int> synset_pmi_polarity(const Synset& synset, const ExpansionConfig& config,
                                       const NGramCounts& counts, LogBase base) {
    bool any = false;
    int sum = 0;
    for (const auto& sense : synset.senses) {
        auto v = so_pmi(sense, config, counts, base);
        if (!v) continue;
        any = true;
        sum += (*v > 0.0) - (*v < 0.0);
    }
    if (!any || sum == 0) return std::nullopt;
    return sum > 0 ? 1 : -1;
}

LabeledSeed expand(const Ontology& ontology, const LabeledSeed& seed, const ExpansionConfig& config,
                   const NGramCounts* counts) {
    if (config.relation_kinds.empty()) throw Error("expansion needs at least one relation kind");
    if (config.algorithm == Algorithm::pmi && counts == nullptr)
        throw Error("the pmi expansion algorithm needs n-gram counts");
    for (const auto& [id, e] : seed) {
        if (!ontology.contains(id)) throw Error("seed id " + id + " is not in the ontology");
        if (e.round != 0 || e.source != LabelSource::hand) throw Error("seed entry " + id + " is not a round-0 hand label");
    }

    const auto graph = build_graph(ontology, config.relation_kinds, true);
    const auto n = graph.size();
    std::vector<const Synset*> synsets(n);
    for (std::size_t i = 0; i < n; ++i) synsets[i] = &ontology.at(graph.nodes()[i]);

    std::vector<std::optional<Label>> label(n);
    for (const auto& [id, e] : seed) label[*graph.ordinal(id)] = e.label;

    LabeledSeed result = seed;
    auto is_source = [&](std::size_t u) {
        return label[u] && config.accepts(synsets[u]->pos) && (config.propagate_neutral || *label[u] != Label::neutral);
    };

    for (std::size_t round = 1; config.max_rounds == 0 || round <= config.max_rounds; ++round) {
        std::vector<std::pair<std::size_t, SeedEntry>> frontier;
        for (std::size_t v = 0; v < n; ++v) {
            if (label[v] || !config.accepts(synsets[v]->pos)) continue;
            bool reached = false;
            long long sum = 0;
            for (const auto& arc : graph.in(v)) {
                if (!is_source(arc.node)) continue;
                reached = true;
                sum += signed_value(implied_label(*label[arc.node], arc.kind));
            }
            if (!reached) continue;
            SeedEntry entry{label_from_sign(sum), round, LabelSource::relation_rule};
            if (config.algorithm == Algorithm::pmi && round >= 2) {
                if (auto polarity = synset_pmi_polarity(*synsets[v], config, *counts)) {
                    entry.label = label_from_sign(*polarity);
                    entry.source = LabelSource::pmi;
                }
            }
            frontier.emplace_back(v, entry);
        }
        if (frontier.empty()) break;
        for (const auto& [v, entry] : frontier) {
            label[v] = entry.label;
            result.emplace(graph.nodes()[v], entry);
        }
    }
    return result;
}

std::vector<TrainingDataset> generate_training_matrix(const Ontology& ontology, const LabeledSeed& seed,
                                                      const NGramCounts* counts, const ExpansionConfig& base) {
    std::vector<TrainingDataset> out;
    int index = 1;
    for (int c = 1; c <= 3; ++c) {
        for (auto algorithm : {Algorithm::default_rules, Algorithm::pmi}) {
            auto config = ExpansionConfig::preset(c, algorithm);
            config.max_rounds = base.max_rounds;
            config.positive_terms = base.positive_terms;
            config.negative_terms = base.negative_terms;
            config.propagate_neutral = base.propagate_neutral;
            out.push_back({"Data-" + std::to_string(index++), c, config, expand(ontology, seed, config, counts)});
        }
    }
    return out;
}

std::string format_dataset(const TrainingDataset& d) {
    std::ostringstream ss;
    ss << "# name=" << d.name << "\n"
       << "# case=" << d.expansion_case << "\n"
       << "# algorithm=" << to_string(d.config.algorithm) << "\n"
       << "# pos_filter=" << to_string(d.config.pos_filter) << "\n"
       << "# relations=" << kinds_list(d.config.relation_kinds) << "\n"
       << "# max_rounds=" << d.config.max_rounds << "\n"
       << "# positive_terms=" << text::join(d.config.positive_terms, ",") << "\n"
       << "# negative_terms=" << text::join(d.config.negative_terms, ",") << "\n"
       << "# propagate_neutral=" << (d.config.propagate_neutral ? "true" : "false") << "\n"
       << "id\tlabel\tround\tsource\n";
    for (const auto& [id, e] : d.labels)
        ss << id << '\t' << to_string(e.label) << '\t' << e.round << '\t' << to_string(e.source) << '\n';
    return ss.str();
}

void write_dataset(const TrainingDataset& dataset, const std::filesystem::path& path) {
    text::write_file(path, format_dataset(dataset));
}

TrainingDataset read_dataset(const std::filesystem::path& path) {
    const auto source = path.string();
    auto rows = text::lines(text::read_file(path));
    TrainingDataset d;
    d.name = path.stem().string();
    bool header_seen = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (text::trim(row).empty()) continue;
        if (!header_seen && row.starts_with("#")) {
            auto body = text::trim(std::string_view(row).substr(1));
            auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            auto key = std::string(body.substr(0, eq));
            auto value = std::string(body.substr(eq + 1));
            auto list = [&] { return value.empty() ? std::vector<std::string>{} : text::split(value, ','); };
            if (key == "name") {
                d.name = value;
            } else if (key == "case") {
                d.expansion_case = std::stoi(value);
            } else if (key == "algorithm") {
                auto a = parse_algorithm(value);
                if (!a) throw ParseError(source, i + 1, "unknown algorithm " + value);
                d.config.algorithm = *a;
            } else if (key == "pos_filter") {
                d.config.pos_filter = value == "adjectives" ? PosFilter::adjectives : PosFilter::all;
            } else if (key == "relations") {
                d.config.relation_kinds.clear();
                for (const auto& k : list()) {
                    auto kind = parse_relation_kind(k);
                    if (!kind) throw ParseError(source, i + 1, "unknown relation kind " + k);
                    d.config.relation_kinds.insert(*kind);
                }
            } else if (key == "max_rounds") {
                d.config.max_rounds = std::stoul(value);
            } else if (key == "positive_terms") {
                d.config.positive_terms = list();
            } else if (key == "negative_terms") {
                d.config.negative_terms = list();
            } else if (key == "propagate_neutral") {
                d.config.propagate_neutral = value != "false";
            }
            continue;
        }
        if (!header_seen) {
            if (!row.starts_with("id\tlabel\tround\tsource"))
                throw ParseError(source, i + 1, "expected header 'id<TAB>label<TAB>round<TAB>source'");
            header_seen = true;
            continue;
        }
        auto f = text::split(row, '\t');
        if (f.size() != 4) throw ParseError(source, i + 1, "expected 4 columns");
        auto label = parse_label(f[1]);
        auto src = parse_source(f[3]);
        if (!label || !src) throw ParseError(source, i + 1, "bad label or source");
        std::size_t round = 0;
        auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), round);
        if (ec != std::errc{} || ptr != f[2].data() + f[2].size()) throw ParseError(source, i + 1, "bad round");
        if (!d.labels.emplace(f[0], SeedEntry{*label, round, *src}).second)
            throw ParseError(source, i + 1, "duplicate id " + f[0]);
    }
    if (!header_seen) throw ParseError(source, rows.size() + 1, "missing dataset header");
    return d;
}

LabeledSeed read_seed(const std::filesystem::path& path) {
    auto contents = text::read_file(path);
    for (const auto& row : text::lines(contents)) {
        if (row.empty() || row.starts_with("#")) continue;
        if (row.starts_with("id\tlabel\tround")) return read_dataset(path).labels;
        break;
    }
    return seed_from_gold(read_gold(path));
}

} // namespace lexforge
