#pragma once

#include "lexforge/annotation.hpp"
#include "lexforge/label.hpp"
#include "lexforge/ontology.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexforge {

/// Unigram/bigram occurrence counts from an n-gram list.
struct NGramCounts {
    std::map<std::string, std::uint64_t, std::less<>> unigrams;
    std::map<std::pair<std::string, std::string>, std::uint64_t> bigrams;
    std::uint64_t total_tokens = 0;

    std::uint64_t unigram(std::string_view t) const;
    /// Sum over both orders (a, b) and (b, a).
    std::uint64_t cooccurrence(const std::string& a, const std::string& b) const;
};

/// Unigram TSV `token<TAB>count` with optional first line `#total<TAB>N`;
/// bigram TSV `tok1 tok2<TAB>count`.
NGramCounts load_counts(const std::filesystem::path& unigrams, const std::filesystem::path& bigrams);

enum class PosFilter { all, adjectives };
enum class Algorithm { default_rules, pmi };
enum class LogBase { two, natural };

std::string_view to_string(PosFilter f) noexcept;
std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept;

struct ExpansionConfig {
    PosFilter pos_filter = PosFilter::all;
    std::set<RelationKind> relation_kinds{RelationKind::antonym};
    Algorithm algorithm = Algorithm::default_rules;
    /// 0 runs to fixed point.
    std::size_t max_rounds = 0;
    std::vector<std::string> positive_terms{"good"};
    std::vector<std::string> negative_terms{"bad"};
    /// When false, neutral labels never act as propagation sources.
    bool propagate_neutral = true;

    /// Expansion cases: 1 = all POS / antonym; 2 = adjectives / antonym,
    /// hyponym, hypernym; 3 = adjectives / antonym.
    static ExpansionConfig preset(int expansion_case, Algorithm algorithm = Algorithm::default_rules);

    bool accepts(Pos p) const noexcept { return pos_filter == PosFilter::all || p == Pos::adjective; }
    /// Recognizes a preset, or 0.
    int case_number() const;
    /// Single-line `key=value` rendering embedded in dataset headers.
    std::string describe() const;

    friend bool operator==(const ExpansionConfig&, const ExpansionConfig&) = default;
};

enum class LabelSource { hand, relation_rule, pmi };
std::string_view to_string(LabelSource s) noexcept;

struct SeedEntry {
    Label label{};
    std::size_t round = 0;
    LabelSource source = LabelSource::hand;

    friend bool operator==(const SeedEntry&, const SeedEntry&) = default;
};

using LabeledSeed = std::map<std::string, SeedEntry, std::less<>>;

/// Round-0 hand seed from an adjudicated gold standard.
LabeledSeed seed_from_gold(const GoldStandard& gold);

/// Antonymy flips the sign; every other kind keeps it.
Label implied_label(Label source, RelationKind kind) noexcept;

/// log((C(a,b) * T) / (C(a) * C(b))); nullopt when any count is missing or T = 0.
std::optional<double> pmi(const std::string& a, const std::string& b, const NGramCounts& counts,
                          LogBase base = LogBase::two);

/// Semantic orientation: PMI against positive terms minus PMI against negative terms.
std::optional<double> so_pmi(const std::string& term, const ExpansionConfig& config, const NGramCounts& counts,
                             LogBase base = LogBase::two);

/// Sign of the summed per-sense SO-PMI signs; nullopt if no sense is
/// scorable or the signs cancel.
std::optional<int> synset_pmi_polarity(const Synset& synset, const ExpansionConfig& config,
                                       const NGramCounts& counts, LogBase base = LogBase::two);

/// Breadth-first bootstrapping from a hand seed. Each round labels every
/// unlabeled synset adjacent to an already-labeled one; labels are computed
/// for the whole frontier before any of them is committed.
LabeledSeed expand(const Ontology& ontology, const LabeledSeed& seed, const ExpansionConfig& config,
                   const NGramCounts* counts = nullptr);

struct TrainingDataset {
    std::string name;
    int expansion_case = 0;
    ExpansionConfig config;
    LabeledSeed labels;
};

/// Data-1..6: cases 1..3, each with the default then the PMI algorithm.
std::vector<TrainingDataset> generate_training_matrix(const Ontology& ontology, const LabeledSeed& seed,
                                                      const NGramCounts* counts,
                                                      const ExpansionConfig& base = ExpansionConfig{});

/// TSV `id label round source` preceded by `# key=value` config lines.
std::string format_dataset(const TrainingDataset& dataset);
void write_dataset(const TrainingDataset& dataset, const std::filesystem::path& path);
TrainingDataset read_dataset(const std::filesystem::path& path);

/// Accepts a dataset file or a gold-standard file (mapped to round-0 hand labels).
LabeledSeed read_seed(const std::filesystem::path& path);

} // namespace lexforge
