#pragma once

#include "lexforge/label.hpp"
#include "lexforge/ontology.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexforge {

/// Gloss, then senses, then examples, single-space joined with empty parts skipped.
std::string synset_to_document(const Synset& synset);

/// Sentences end at . ! ? U+061F U+06D4; tokens break on whitespace and
/// punctuation, which is dropped. Empty sentences are omitted.
std::vector<std::vector<std::string>> tokenize(std::string_view text);

class Stemmer {
public:
    virtual ~Stemmer() = default;
    virtual std::string stem(std::string_view token) const = 0;
};

class IdentityStemmer final : public Stemmer {
public:
    std::string stem(std::string_view token) const override { return std::string(token); }
};

/// Rewrites the longest matching suffix once. A rewrite that would empty
/// the token is skipped.
class SuffixStemmer final : public Stemmer {
public:
    explicit SuffixStemmer(std::vector<std::pair<std::string, std::string>> rules);
    /// TSV `suffix<TAB>replacement`; the replacement may be empty.
    static SuffixStemmer from_file(const std::filesystem::path& path);

    std::string stem(std::string_view token) const override;

private:
    std::vector<std::pair<std::string, std::string>> rules_;
};

class Tagger {
public:
    virtual ~Tagger() = default;
    /// nullopt when the token is unknown to the tagger.
    virtual std::optional<std::string> tag(std::string_view token) const = 0;
};

class LexiconTagger final : public Tagger {
public:
    explicit LexiconTagger(std::map<std::string, std::string, std::less<>> lexicon);
    /// TSV `token<TAB>tag`.
    static LexiconTagger from_file(const std::filesystem::path& path);

    std::optional<std::string> tag(std::string_view token) const override;

private:
    std::map<std::string, std::string, std::less<>> lexicon_;
};

/// Tags every token identically; handy for tests and single-POS corpora.
class ConstantTagger final : public Tagger {
public:
    explicit ConstantTagger(std::string tag) : tag_(std::move(tag)) {}
    std::optional<std::string> tag(std::string_view) const override { return tag_; }

private:
    std::string tag_;
};

/// Stem each token, tag the stem, drop it when tagged outside `keep_pos`.
/// Untaggable tokens survive. A null tagger leaves every token untagged.
std::vector<std::string> normalize(const std::vector<std::string>& tokens, const Stemmer& stemmer,
                                   const Tagger* tagger, const std::set<std::string, std::less<>>& keep_pos);

struct GlossDocument {
    std::string id;
    std::string text;
    std::vector<std::string> tokens;
    std::optional<Label> label;
};

struct DocPipeline {
    std::shared_ptr<const Stemmer> stemmer = std::make_shared<IdentityStemmer>();
    std::shared_ptr<const Tagger> tagger;
    std::set<std::string, std::less<>> keep_pos{"noun", "adjective"};

    GlossDocument make_document(const Synset& synset) const;
    /// One document per synset, in id order.
    std::vector<GlossDocument> build(const Ontology& ontology) const;
};

/// Identity stemmer and no tagger unless rule/lexicon files are given.
DocPipeline load_doc_pipeline(const std::optional<std::filesystem::path>& stemmer_rules,
                              const std::optional<std::filesystem::path>& tagger_lexicon,
                              std::set<std::string, std::less<>> keep_pos = {"noun", "adjective"});

class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t documents);

    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t documents() const noexcept { return documents_; }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<std::size_t>& document_frequency() const noexcept { return df_; }
    std::optional<std::uint32_t> index(std::string_view term) const;
    /// ln((1 + N) / (1 + df)) + 1
    double idf(std::uint32_t index) const;
    /// Stable fingerprint of terms, document frequencies and N.
    std::string checksum() const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.terms_ == b.terms_ && a.df_ == b.df_ && a.documents_ == b.documents_;
    }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::map<std::string, std::uint32_t, std::less<>> index_;
    std::size_t documents_ = 0;
};

/// Lexicographic term order; df counts each document once per term.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& documents);
Vocabulary build_vocabulary(const std::vector<GlossDocument>& documents);

struct FeatureVector {
    std::string id;
    /// (term index, weight), ascending by index.
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const noexcept { return entries.empty(); }
};

/// Raw tf times smoothed idf, then L2-normalized. Unknown tokens are ignored.
FeatureVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocabulary, std::string id = {});

// JSON Lines documents: {"id", "text", "tokens"}
void write_documents(const std::vector<GlossDocument>& docs, const std::filesystem::path& path);
std::vector<GlossDocument> read_documents(const std::filesystem::path& path);

/// `id<TAB>index:weight index:weight ...` lines.
std::string format_vectors(const std::vector<FeatureVector>& vectors);

} // namespace lexforge
