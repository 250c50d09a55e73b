#pragma once

#include "lexforge/annotation.hpp"
#include "lexforge/classify.hpp"
#include "lexforge/docpipe.hpp"
#include "lexforge/expansion.hpp"
#include "lexforge/ontology.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

enum class EntrySource { hand_seed, expansion, gold, classifier };
std::string_view to_string(EntrySource s) noexcept;
std::optional<EntrySource> parse_entry_source(std::string_view s) noexcept;

struct LexiconEntry {
    Pos pos{};
    Label label{};
    EntrySource source{};

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct SentimentLexicon {
    std::map<std::string, LexiconEntry, std::less<>> entries;
    /// Build provenance (model, dataset, timestamp). Exported separately.
    std::map<std::string, std::string> metadata;
};

/// Training labels concatenated with the gold standard; gold wins on overlap.
std::map<std::string, Label, std::less<>> combined_labels(const LabeledSeed& training, const GoldStandard& gold);

/// Labels every synset: gold, then hand seed / expansion, then the model
/// over the synset's gloss document for everything else.
SentimentLexicon build_lexicon(const Ontology& ontology, const LabeledSeed& training, const GoldStandard& gold,
                               const Model& model, const std::vector<GlossDocument>& documents);

struct LexiconStats {
    std::map<Label, std::size_t> by_label;
    std::map<EntrySource, std::size_t> by_source;
    std::size_t total = 0;
};

LexiconStats lexicon_stats(const SentimentLexicon& lexicon);
std::string format_lexicon_stats(const LexiconStats& stats);

enum class LexiconFormat { tsv, jsonl };

/// Id-sorted records; metadata goes to `<path>.meta.json`.
std::size_t export_lexicon(const SentimentLexicon& lexicon, const std::filesystem::path& path,
                           LexiconFormat format = LexiconFormat::tsv);
std::string format_lexicon(const SentimentLexicon& lexicon, LexiconFormat format = LexiconFormat::tsv);
/// Detects TSV vs JSON Lines from the first line.
SentimentLexicon import_lexicon(const std::filesystem::path& path);

} // namespace lexforge
