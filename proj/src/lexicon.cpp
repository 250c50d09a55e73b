#include "lexforge/lexicon.hpp"

#include "lexforge/error.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>

namespace lexforge {

using nlohmann::ordered_json;

std::string_view to_string(EntrySource s) noexcept {
    switch (s) {
    case EntrySource::hand_seed: return "hand-seed";
    case EntrySource::expansion: return "expansion";
    case EntrySource::gold: return "gold";
    case EntrySource::classifier: return "classifier";
    }
    return "classifier";
}

std::optional<EntrySource> parse_entry_source(std::string_view s) noexcept {
    for (auto v : {EntrySource::hand_seed, EntrySource::expansion, EntrySource::gold, EntrySource::classifier})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::map<std::string, Label, std::less<>> combined_labels(const LabeledSeed& training, const GoldStandard& gold) {
    std::map<std::string, Label, std::less<>> out;
    for (const auto& [id, e] : training) out[id] = e.label;
    for (const auto& [id, e] : gold) out[id] = e.label;
    return out;
}

namespace {

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

SentimentLexicon build_lexicon(const Ontology& ontology, const LabeledSeed& training, const GoldStandard& gold,
                               const Model& model, const std::vector<GlossDocument>& documents) {
    std::map<std::string_view, const GlossDocument*> docs;
    for (const auto& d : documents) {
        if (!ontology.contains(d.id)) throw Error("document " + d.id + " is not an ontology synset (corpus mismatch)");
        docs.emplace(d.id, &d);
    }
    if (docs.size() != ontology.size())
        throw Error("documents cover " + std::to_string(docs.size()) + " of " + std::to_string(ontology.size()) +
                    " synsets (corpus mismatch)");
    check_vocabulary(model, build_vocabulary(documents));

    SentimentLexicon lex;
    for (const auto& [id, s] : ontology) {
        LexiconEntry entry{s.pos, Label::neutral, EntrySource::classifier};
        if (auto g = gold.find(id); g != gold.end()) {
            entry.label = g->second.label;
            entry.source = EntrySource::gold;
        } else if (auto t = training.find(id); t != training.end()) {
            entry.label = t->second.label;
            entry.source = t->second.source == LabelSource::hand ? EntrySource::hand_seed : EntrySource::expansion;
        } else {
            entry.label = model.predict_tokens(docs.at(id)->tokens);
        }
        lex.entries.emplace(id, entry);
    }
    for (const auto& [id, _] : gold)
        if (!ontology.contains(id)) throw Error("gold id " + id + " is not in the ontology");

    lex.metadata = model.metadata();
    lex.metadata["model"] = model.params().describe();
    lex.metadata["vocabulary"] = model.vocabulary().checksum();
    lex.metadata["timestamp"] = utc_timestamp();
    return lex;
}

LexiconStats lexicon_stats(const SentimentLexicon& lexicon) {
    LexiconStats st;
    for (auto l : kLabelOrder) st.by_label[l] = 0;
    for (auto s : {EntrySource::hand_seed, EntrySource::expansion, EntrySource::gold, EntrySource::classifier})
        st.by_source[s] = 0;
    for (const auto& [_, e] : lexicon.entries) {
        ++st.by_label[e.label];
        ++st.by_source[e.source];
        ++st.total;
    }
    return st;
}

std::string format_lexicon_stats(const LexiconStats& st) {
    std::string out = "synsets\t" + std::to_string(st.total) + "\n";
    for (auto l : {Label::positive, Label::neutral, Label::negative})
        out += std::string(to_string(l)) + "\t" + std::to_string(st.by_label.at(l)) + "\n";
    for (const auto& [s, n] : st.by_source) out += "source:" + std::string(to_string(s)) + "\t" + std::to_string(n) + "\n";
    return out;
}

std::string format_lexicon(const SentimentLexicon& lexicon, LexiconFormat format) {
    std::string out;
    if (format == LexiconFormat::tsv) {
        out = "id\tpos\tlabel\tsource\n";
        for (const auto& [id, e] : lexicon.entries)
            out += id + "\t" + std::string(to_string(e.pos)) + "\t" + std::string(to_string(e.label)) + "\t" +
                   std::string(to_string(e.source)) + "\n";
    } else {
        for (const auto& [id, e] : lexicon.entries) {
            ordered_json j{{"id", id}, {"pos", to_string(e.pos)}, {"label", to_string(e.label)},
                           {"source", to_string(e.source)}};
            out += j.dump() + "\n";
        }
    }
    return out;
}

std::size_t export_lexicon(const SentimentLexicon& lexicon, const std::filesystem::path& path, LexiconFormat format) {
    text::write_file(path, format_lexicon(lexicon, format));
    auto meta = path;
    meta += ".meta.json";
    text::write_file(meta, ordered_json(lexicon.metadata).dump(2) + "\n");
    return lexicon.entries.size();
}

SentimentLexicon import_lexicon(const std::filesystem::path& path) {
    const auto source = path.string();
    auto rows = text::lines(text::read_file(path));
    SentimentLexicon lex;
    auto add = [&](std::size_t line, const std::string& id, const std::string& pos, const std::string& label,
                   const std::string& src) {
        auto p = parse_pos(pos);
        auto l = parse_label(label);
        auto s = parse_entry_source(src);
        if (id.empty() || !p || !l || !s) throw ParseError(source, line, "malformed lexicon record");
        if (!lex.entries.emplace(id, LexiconEntry{*p, *l, *s}).second)
            throw ParseError(source, line, "duplicate id " + id);
    };
    bool tsv = !rows.empty() && rows.front().starts_with("id\t");
    for (std::size_t i = tsv ? 1 : 0; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) continue;
        if (tsv) {
            auto f = text::split(rows[i], '\t');
            if (f.size() != 4) throw ParseError(source, i + 1, "expected 4 columns");
            add(i + 1, f[0], f[1], f[2], f[3]);
        } else {
            auto j = ordered_json::parse(rows[i], nullptr, false);
            if (j.is_discarded() || !j.is_object()) throw ParseError(source, i + 1, "malformed JSON record");
            add(i + 1, j.value("id", ""), j.value("pos", ""), j.value("label", ""), j.value("source", ""));
        }
    }
    auto meta = path;
    meta += ".meta.json";
    if (std::filesystem::exists(meta)) {
        auto j = ordered_json::parse(text::read_file(meta), nullptr, false);
        if (j.is_object())
            for (const auto& [k, v] : j.items())
                if (v.is_string()) lex.metadata[k] = v.get<std::string>();
    }
    return lex;
}

} // namespace lexforge
