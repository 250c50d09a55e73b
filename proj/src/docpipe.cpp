#include "lexforge/docpipe.hpp"

#include "lexforge/error.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lexforge {

using nlohmann::ordered_json;

std::string synset_to_document(const Synset& synset) {
    std::vector<std::string> parts;
    auto add = [&](std::string_view s) {
        auto t = text::squeeze_spaces(s);
        if (!t.empty()) parts.push_back(std::move(t));
    };
    add(synset.gloss);
    for (const auto& s : synset.senses) add(s);
    for (const auto& e : synset.examples) add(e);
    return text::join(parts, " ");
}

namespace {

/// Decodes one UTF-8 code point at `pos`, advancing it. Invalid bytes come
/// back as themselves so odd input degrades to opaque token characters.
char32_t next_codepoint(std::string_view s, std::size_t& pos, std::size_t& len) {
    auto b0 = static_cast<unsigned char>(s[pos]);
    std::size_t need = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 1;
    if (pos + need > s.size()) need = 1;
    char32_t cp = need == 1 ? b0 : need == 2 ? (b0 & 0x1F) : need == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (std::size_t i = 1; i < need; ++i) {
        auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b >> 6) != 0x2) {
            need = 1;
            cp = b0;
            break;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    len = need;
    pos += need;
    return cp;
}

bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0x00A0 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_sentence_end(char32_t c) {
    return c == U'.' || c == U'!' || c == U'?' || c == 0x061F || c == 0x06D4;
}

bool is_punct(char32_t c) {
    if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
                         (c >= 0x7B && c <= 0x7E);
    // U+200C/U+200D (zero-width joiners) stay inside words.
    return (c >= 0x00A1 && c <= 0x00BF && c != 0x00AA && c != 0x00B5 && c != 0x00BA) || c == 0x00D7 ||
           c == 0x00F7 || c == 0x060C || c == 0x061B || c == 0x061F || (c >= 0x066A && c <= 0x066D) ||
           c == 0x06D4 || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
           (c >= 0x3001 && c <= 0x3003) || (c >= 0xFF01 && c <= 0xFF0F);
}

} // namespace

std::vector<std::vector<std::string>> tokenize(std::string_view input) {
    std::vector<std::vector<std::string>> sentences;
    std::vector<std::string> sentence;
    std::string token;
    auto flush_token = [&] {
        if (!token.empty()) sentence.push_back(std::move(token));
        token.clear();
    };
    auto flush_sentence = [&] {
        flush_token();
        if (!sentence.empty()) sentences.push_back(std::move(sentence));
        sentence.clear();
    };

    std::size_t pos = 0;
    while (pos < input.size()) {
        std::size_t start = pos, len = 0;
        char32_t c = next_codepoint(input, pos, len);
        if (is_sentence_end(c)) {
            flush_sentence();
        } else if (is_space(c) || is_punct(c)) {
            flush_token();
        } else {
            token.append(input.substr(start, len));
        }
    }
    flush_sentence();
    return sentences;
}

SuffixStemmer::SuffixStemmer(std::vector<std::pair<std::string, std::string>> rules) : rules_(std::move(rules)) {
    std::stable_sort(rules_.begin(), rules_.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

SuffixStemmer SuffixStemmer::from_file(const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> rules;
    auto rows = text::lines(text::read_file(path));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty() || rows[i].starts_with("#")) continue;
        auto f = text::split(rows[i], '\t');
        if (f.size() > 2 || f[0].empty()) throw ParseError(path.string(), i + 1, "expected 'suffix<TAB>replacement'");
        rules.emplace_back(f[0], f.size() == 2 ? f[1] : std::string{});
    }
    return SuffixStemmer(std::move(rules));
}

std::string SuffixStemmer::stem(std::string_view token) const {
    for (const auto& [suffix, replacement] : rules_) {
        if (token.size() > suffix.size() && token.ends_with(suffix))
            return std::string(token.substr(0, token.size() - suffix.size())) + replacement;
    }
    return std::string(token);
}

LexiconTagger::LexiconTagger(std::map<std::string, std::string, std::less<>> lexicon) : lexicon_(std::move(lexicon)) {}

LexiconTagger LexiconTagger::from_file(const std::filesystem::path& path) {
    std::map<std::string, std::string, std::less<>> lexicon;
    auto rows = text::lines(text::read_file(path));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty() || rows[i].starts_with("#")) continue;
        auto f = text::split(rows[i], '\t');
        if (f.size() != 2 || f[0].empty() || f[1].empty())
            throw ParseError(path.string(), i + 1, "expected 'token<TAB>tag'");
        lexicon[f[0]] = f[1];
    }
    return LexiconTagger(std::move(lexicon));
}

std::optional<std::string> LexiconTagger::tag(std::string_view token) const {
    auto it = lexicon_.find(token);
    if (it == lexicon_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens, const Stemmer& stemmer,
                                   const Tagger* tagger, const std::set<std::string, std::less<>>& keep_pos) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) {
        std::string stem;
        try {
            stem = stemmer.stem(token);
        } catch (const std::exception& e) {
            throw Error("stemmer failed on token '" + token + "': " + e.what());
        }
        if (stem.empty()) continue;
        if (tagger) {
            std::optional<std::string> tag;
            try {
                tag = tagger->tag(stem);
            } catch (const std::exception& e) {
                throw Error("tagger failed on token '" + stem + "': " + e.what());
            }
            if (tag && !keep_pos.contains(*tag)) continue;
        }
        out.push_back(std::move(stem));
    }
    return out;
}

GlossDocument DocPipeline::make_document(const Synset& synset) const {
    GlossDocument doc;
    doc.id = synset.id;
    doc.text = synset_to_document(synset);
    for (const auto& sentence : tokenize(doc.text)) {
        auto kept = normalize(sentence, *stemmer, tagger.get(), keep_pos);
        doc.tokens.insert(doc.tokens.end(), kept.begin(), kept.end());
    }
    return doc;
}

std::vector<GlossDocument> DocPipeline::build(const Ontology& ontology) const {
    std::vector<GlossDocument> docs;
    docs.reserve(ontology.size());
    for (const auto& [_, s] : ontology) docs.push_back(make_document(s));
    return docs;
}

DocPipeline load_doc_pipeline(const std::optional<std::filesystem::path>& stemmer_rules,
                              const std::optional<std::filesystem::path>& tagger_lexicon,
                              std::set<std::string, std::less<>> keep_pos) {
    DocPipeline p;
    if (stemmer_rules) p.stemmer = std::make_shared<SuffixStemmer>(SuffixStemmer::from_file(*stemmer_rules));
    if (tagger_lexicon) p.tagger = std::make_shared<LexiconTagger>(LexiconTagger::from_file(*tagger_lexicon));
    p.keep_pos = std::move(keep_pos);
    return p;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t documents)
    : terms_(std::move(terms)), df_(std::move(df)), documents_(documents) {
    if (terms_.size() != df_.size()) throw Error("vocabulary term and df lengths differ");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (df_[i] < 1 || df_[i] > documents_) throw Error("document frequency out of range for " + terms_[i]);
        if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
            throw Error("duplicate vocabulary term " + terms_[i]);
    }
}

std::optional<std::uint32_t> Vocabulary::index(std::string_view term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Vocabulary::idf(std::uint32_t i) const {
    return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + static_cast<double>(df_.at(i)))) + 1.0;
}

std::string Vocabulary::checksum() const {
    std::uint64_t h = text::fnv1a(std::to_string(documents_) + "\n");
    for (std::size_t i = 0; i < terms_.size(); ++i) h = text::fnv1a(terms_[i] + "\t" + std::to_string(df_[i]) + "\n", h);
    return text::hex64(h);
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& documents) {
    if (documents.empty()) throw Error("a vocabulary needs at least one document");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        std::set<std::string_view> seen(doc.begin(), doc.end());
        for (auto t : seen) ++df[std::string(t)];
    }
    std::vector<std::string> terms;
    std::vector<std::size_t> counts;
    for (auto& [t, c] : df) {
        terms.push_back(t);
        counts.push_back(c);
    }
    return Vocabulary(std::move(terms), std::move(counts), documents.size());
}

Vocabulary build_vocabulary(const std::vector<GlossDocument>& documents) {
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(documents.size());
    for (const auto& d : documents) tokens.push_back(d.tokens);
    return build_vocabulary(tokens);
}

FeatureVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocabulary, std::string id) {
    std::map<std::uint32_t, double> tf;
    for (const auto& t : tokens)
        if (auto i = vocabulary.index(t)) tf[*i] += 1.0;

    FeatureVector v;
    v.id = std::move(id);
    double norm_sq = 0.0;
    for (const auto& [i, count] : tf) {
        double w = count * vocabulary.idf(i);
        v.entries.emplace_back(i, w);
        norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
        const double norm = std::sqrt(norm_sq);
        for (auto& e : v.entries) e.second /= norm;
    }
    return v;
}

void write_documents(const std::vector<GlossDocument>& docs, const std::filesystem::path& path) {
    std::string out;
    for (const auto& d : docs) {
        ordered_json j;
        j["id"] = d.id;
        j["text"] = d.text;
        j["tokens"] = d.tokens;
        if (d.label) j["label"] = to_string(*d.label);
        out += j.dump() + "\n";
    }
    text::write_file(path, out);
}

std::vector<GlossDocument> read_documents(const std::filesystem::path& path) {
    std::vector<GlossDocument> docs;
    auto rows = text::lines(text::read_file(path));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) continue;
        try {
            auto j = ordered_json::parse(rows[i]);
            GlossDocument d;
            d.id = j.at("id").get<std::string>();
            d.text = j.value("text", std::string{});
            d.tokens = j.at("tokens").get<std::vector<std::string>>();
            if (j.contains("label")) d.label = parse_label(j.at("label").get<std::string>());
            docs.push_back(std::move(d));
        } catch (const ordered_json::exception& e) {
            throw ParseError(path.string(), i + 1, std::string("malformed document: ") + e.what());
        }
    }
    return docs;
}

std::string format_vectors(const std::vector<FeatureVector>& vectors) {
    std::string out;
    char buf[64];
    for (const auto& v : vectors) {
        out += v.id;
        out += '\t';
        for (std::size_t i = 0; i < v.entries.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%u:%.17g", i ? " " : "", v.entries[i].first, v.entries[i].second);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

} // namespace lexforge
