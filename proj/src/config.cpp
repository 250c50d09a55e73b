#include "lexforge/config.hpp"

#include "lexforge/text.hpp"

#include <cctype>
#include <charconv>
#include <functional>

namespace lexforge {

namespace {

class ValueParser {
public:
    ValueParser(std::string_view s, const std::string& where) : s_(s), where_(where) {}

    ConfigValue parse() {
        skip_ws();
        auto v = value();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    ConfigValue value() {
        if (pos_ >= s_.size()) fail("missing value");
        char c = s_[pos_];
        if (c == '"' || c == '\'') return string();
        if (c == '[') return array();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return integer();
    }

    std::string string() {
        char quote = s_[pos_++];
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != quote) {
            char c = s_[pos_++];
            if (quote == '"' && c == '\\') {
                if (pos_ >= s_.size()) fail("unterminated escape");
                char e = s_[pos_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out += c;
            }
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    std::int64_t integer() {
        std::string digits;
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) digits += s_[pos_++];
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            if (s_[pos_] != '_') digits += s_[pos_];
            ++pos_;
        }
        if (digits.empty() || digits == "+" || digits == "-") {
            pos_ = start;
            fail("unrecognized value '" + std::string(s_.substr(start)) + "'");
        }
        std::int64_t v = 0;
        const char* b = digits.data() + (digits[0] == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(b, digits.data() + digits.size(), v);
        if (ec != std::errc{}) fail("integer out of range");
        return v;
    }

    ConfigValue array() {
        ++pos_;
        std::vector<std::string> strings;
        std::vector<std::int64_t> ints;
        while (true) {
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated array");
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            auto v = value();
            if (auto* str = std::get_if<std::string>(&v)) {
                if (!ints.empty()) fail("mixed array element types");
                strings.push_back(std::move(*str));
            } else if (auto* i = std::get_if<std::int64_t>(&v)) {
                if (!strings.empty()) fail("mixed array element types");
                ints.push_back(*i);
            } else {
                fail("arrays may hold only strings or integers");
            }
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        }
        if (!ints.empty()) return ints;
        return strings;
    }

    std::string_view s_;
    const std::string& where_;
    std::size_t pos_ = 0;
};

/// Drops a trailing comment outside quotes; adds the line's bracket balance to `depth`.
std::string strip_comment(std::string_view line, int& depth) {
    std::string out;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            out += c;
            if (c == '\\' && quote == '"' && i + 1 < line.size()) {
                out += line[++i];
            } else if (c == quote) {
                quote = 0;
            }
            continue;
        }
        if (c == '#') break;
        if (c == '"' || c == '\'') quote = c;
        if (c == '[') ++depth;
        if (c == ']') --depth;
        out += c;
    }
    return out;
}

bool bare_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

} // namespace

std::map<std::string, ConfigValue> parse_flat_toml(std::string_view contents, const std::string& source) {
    std::map<std::string, ConfigValue> out;
    auto rows = text::lines(contents);
    std::string section;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int depth = 0;
        auto line = std::string(text::trim(strip_comment(rows[i], depth)));
        const auto where = source + ":" + std::to_string(i + 1);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = std::string(text::trim(std::string_view(line).substr(1, line.size() - 2)));
            if (!bare_key(section)) throw ConfigError(where + ": malformed section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        auto key = std::string(text::trim(std::string_view(line).substr(0, eq)));
        if (!bare_key(key)) throw ConfigError(where + ": malformed key '" + key + "'");
        std::string value(text::trim(std::string_view(line).substr(eq + 1)));
        int open = 0;
        strip_comment(value, open);
        while (open > 0 && i + 1 < rows.size()) {
            value += " " + strip_comment(rows[++i], open);
        }
        auto full = section.empty() ? key : section + "." + key;
        if (out.contains(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
        out.emplace(full, ValueParser(value, where + " (" + full + ")").parse());
    }
    return out;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    std::string contents;
    try {
        contents = text::read_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    auto cfg = from_string(contents, path.parent_path(), path.string());
    cfg.config_path = path;
    return cfg;
}

PipelineConfig PipelineConfig::from_string(std::string_view contents, const std::filesystem::path& base_dir,
                                           const std::string& source) {
    auto values = parse_flat_toml(contents, source);
    PipelineConfig cfg;

    auto type_error = [&](const std::string& key, const char* want) {
        return ConfigError(source + ": field '" + key + "' must be " + want);
    };
    auto resolve = [&](const std::string& s) {
        std::filesystem::path p(s);
        return p.is_absolute() ? p : base_dir / p;
    };
    auto str = [&](const std::string& key, const ConfigValue& v) {
        if (auto* s = std::get_if<std::string>(&v)) return *s;
        throw type_error(key, "a string");
    };
    auto boolean = [&](const std::string& key, const ConfigValue& v) {
        if (auto* b = std::get_if<bool>(&v)) return *b;
        throw type_error(key, "a boolean");
    };
    auto count = [&](const std::string& key, const ConfigValue& v) -> std::uint64_t {
        if (auto* i = std::get_if<std::int64_t>(&v); i && *i >= 0) return static_cast<std::uint64_t>(*i);
        throw type_error(key, "a non-negative integer");
    };
    auto strings = [&](const std::string& key, const ConfigValue& v) {
        if (auto* a = std::get_if<std::vector<std::string>>(&v)) return *a;
        throw type_error(key, "an array of strings");
    };
    auto paths = [&](const std::string& key, const ConfigValue& v) {
        std::vector<std::filesystem::path> out;
        for (const auto& s : strings(key, v)) out.push_back(resolve(s));
        return out;
    };

    using Setter = std::function<void(const std::string&, const ConfigValue&)>;
    const std::map<std::string, Setter> setters{
        {"ontology", [&](auto& k, auto& v) { cfg.ontology = resolve(str(k, v)); }},
        {"output_dir", [&](auto& k, auto& v) { cfg.output_dir = resolve(str(k, v)); }},
        {"lenient", [&](auto& k, auto& v) { cfg.lenient = boolean(k, v); }},
        {"rng_seed", [&](auto& k, auto& v) { cfg.rng_seed = count(k, v); }},
        {"counts.unigrams", [&](auto& k, auto& v) { cfg.counts_unigrams = resolve(str(k, v)); }},
        {"counts.bigrams", [&](auto& k, auto& v) { cfg.counts_bigrams = resolve(str(k, v)); }},
        {"annotation.seed_sheets", [&](auto& k, auto& v) { cfg.seed_sheets = paths(k, v); }},
        {"annotation.seed_tiebreak", [&](auto& k, auto& v) { cfg.seed_tiebreak = resolve(str(k, v)); }},
        {"annotation.gold_sheets", [&](auto& k, auto& v) { cfg.gold_sheets = paths(k, v); }},
        {"annotation.gold_tiebreak", [&](auto& k, auto& v) { cfg.gold_tiebreak = resolve(str(k, v)); }},
        {"seeds.relations",
         [&](auto& k, auto& v) {
             cfg.graph_relations.clear();
             for (const auto& name : strings(k, v)) {
                 auto kind = parse_relation_kind(name);
                 if (!kind) throw ConfigError(source + ": field '" + k + "' has unknown relation kind '" + name + "'");
                 cfg.graph_relations.insert(*kind);
             }
             if (cfg.graph_relations.empty()) throw ConfigError(source + ": field '" + k + "' must not be empty");
         }},
        {"seeds.symmetrize", [&](auto& k, auto& v) { cfg.symmetrize = boolean(k, v); }},
        {"seeds.min_size",
         [&](auto& k, auto& v) {
             cfg.min_seed_size = count(k, v);
             if (cfg.min_seed_size < 1) throw ConfigError(source + ": field '" + k + "' must be >= 1");
         }},
        {"seeds.random", [&](auto& k, auto& v) { cfg.random_seeds = boolean(k, v); }},
        {"expansion.max_rounds", [&](auto& k, auto& v) { cfg.expansion.max_rounds = count(k, v); }},
        {"expansion.positive_terms", [&](auto& k, auto& v) { cfg.expansion.positive_terms = strings(k, v); }},
        {"expansion.negative_terms", [&](auto& k, auto& v) { cfg.expansion.negative_terms = strings(k, v); }},
        {"expansion.propagate_neutral", [&](auto& k, auto& v) { cfg.expansion.propagate_neutral = boolean(k, v); }},
        {"docs.stemmer_rules", [&](auto& k, auto& v) { cfg.stemmer_rules = resolve(str(k, v)); }},
        {"docs.tagger_lexicon", [&](auto& k, auto& v) { cfg.tagger_lexicon = resolve(str(k, v)); }},
        {"docs.keep_pos",
         [&](auto& k, auto& v) {
             auto list = strings(k, v);
             cfg.keep_pos = {list.begin(), list.end()};
         }},
        {"classify.knn_grid",
         [&](auto& k, auto& v) {
             try {
                 cfg.knn_grid = parse_grid(ModelKind::knn, str(k, v));
             } catch (const ConfigError&) {
                 throw;
             } catch (const std::exception& e) {
                 throw ConfigError(source + ": field '" + k + "': " + e.what());
             }
         }},
        {"classify.centroid_grid",
         [&](auto& k, auto& v) {
             try {
                 cfg.centroid_grid = parse_grid(ModelKind::centroid, str(k, v));
             } catch (const ConfigError&) {
                 throw;
             } catch (const std::exception& e) {
                 throw ConfigError(source + ": field '" + k + "': " + e.what());
             }
         }},
        {"classify.folds",
         [&](auto& k, auto& v) {
             cfg.folds = count(k, v);
             if (cfg.folds < 2) throw ConfigError(source + ": field '" + k + "' must be >= 2");
         }},
        {"classify.score",
         [&](auto& k, auto& v) {
             auto s = parse_score_kind(str(k, v));
             if (!s) throw ConfigError(source + ": field '" + k + "' must be accuracy or macro-f");
             cfg.score = *s;
         }},
        {"classify.shuffle_folds", [&](auto& k, auto& v) { cfg.shuffle_folds = boolean(k, v); }},
        {"lexicon.dataset",
         [&](auto& k, auto& v) {
             auto name = str(k, v);
             bool known = false;
             for (int i = 1; i <= 6; ++i) known |= name == "Data-" + std::to_string(i);
             if (!known) throw ConfigError(source + ": field '" + k + "' names unknown preset '" + name + "' (Data-1..Data-6)");
             cfg.lexicon_dataset = name;
         }},
        {"lexicon.classifier",
         [&](auto& k, auto& v) {
             auto kind = parse_model_kind(str(k, v));
             if (!kind) throw ConfigError(source + ": field '" + k + "' must be knn or centroid");
             cfg.lexicon_classifier = *kind;
         }},
    };

    for (const auto& [key, value] : values) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(source + ": unknown field '" + key + "'");
        it->second(key, value);
    }
    for (const char* required : {"ontology", "output_dir", "counts.unigrams", "counts.bigrams"})
        if (!values.contains(required)) throw ConfigError(source + ": missing required field '" + required + "'");
    return cfg;
}

std::vector<std::string> PipelineConfig::describe() const {
    std::vector<std::string> out;
    auto path_list = [](const std::vector<std::filesystem::path>& ps) {
        std::vector<std::string> s;
        for (const auto& p : ps) s.push_back(p.string());
        return "[" + text::join(s, ", ") + "]";
    };
    std::vector<std::string> rels;
    for (auto k : graph_relations) rels.emplace_back(to_string(k));
    std::vector<std::string> pos(keep_pos.begin(), keep_pos.end());
    std::vector<std::string> knn, centroid;
    for (const auto& p : knn_grid) knn.push_back(p.describe());
    for (const auto& p : centroid_grid) centroid.push_back(p.describe());

    out.push_back("ontology = " + ontology.string());
    out.push_back("output_dir = " + output_dir.string());
    out.push_back("lenient = " + std::string(lenient ? "true" : "false"));
    out.push_back("rng_seed = " + std::to_string(rng_seed));
    out.push_back("counts.unigrams = " + counts_unigrams.string());
    out.push_back("counts.bigrams = " + counts_bigrams.string());
    out.push_back("annotation.seed_sheets = " + path_list(seed_sheets));
    out.push_back("annotation.seed_tiebreak = " + (seed_tiebreak ? seed_tiebreak->string() : std::string("(none)")));
    out.push_back("annotation.gold_sheets = " + path_list(gold_sheets));
    out.push_back("annotation.gold_tiebreak = " + (gold_tiebreak ? gold_tiebreak->string() : std::string("(none)")));
    out.push_back("seeds.relations = " + text::join(rels, ","));
    out.push_back("seeds.symmetrize = " + std::string(symmetrize ? "true" : "false"));
    out.push_back("seeds.min_size = " + std::to_string(min_seed_size));
    out.push_back("seeds.random = " + std::string(random_seeds ? "true" : "false"));
    out.push_back("expansion = " + expansion.describe());
    out.push_back("docs.stemmer_rules = " + (stemmer_rules ? stemmer_rules->string() : std::string("(identity)")));
    out.push_back("docs.tagger_lexicon = " + (tagger_lexicon ? tagger_lexicon->string() : std::string("(none)")));
    out.push_back("docs.keep_pos = " + text::join(pos, ","));
    out.push_back("classify.knn_grid = " + text::join(knn, "; "));
    out.push_back("classify.centroid_grid = " + text::join(centroid, "; "));
    out.push_back("classify.folds = " + std::to_string(folds));
    out.push_back("classify.score = " + std::string(to_string(score)));
    out.push_back("classify.shuffle_folds = " + std::string(shuffle_folds ? "true" : "false"));
    out.push_back("lexicon.dataset = " + lexicon_dataset);
    out.push_back("lexicon.classifier = " + std::string(to_string(lexicon_classifier)));
    return out;
}

ConfigReport validate_config(const std::filesystem::path& path) {
    ConfigReport report;
    PipelineConfig cfg;
    try {
        cfg = PipelineConfig::from_file(path);
    } catch (const Error& e) {
        report.errors.emplace_back(e.what());
        return report;
    }
    report.resolved = cfg.describe();
    auto need = [&](const std::string& field, const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) report.errors.push_back("field '" + field + "': missing path " + p.string());
    };
    need("ontology", cfg.ontology);
    need("counts.unigrams", cfg.counts_unigrams);
    need("counts.bigrams", cfg.counts_bigrams);
    if (cfg.stemmer_rules) need("docs.stemmer_rules", *cfg.stemmer_rules);
    if (cfg.tagger_lexicon) need("docs.tagger_lexicon", *cfg.tagger_lexicon);
    auto pending = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) report.pending.push_back(p.string());
    };
    for (const auto& p : cfg.seed_sheets) pending(p);
    if (cfg.seed_tiebreak) pending(*cfg.seed_tiebreak);
    for (const auto& p : cfg.gold_sheets) pending(p);
    if (cfg.gold_tiebreak) pending(*cfg.gold_tiebreak);
    report.ok = report.errors.empty();
    return report;
}

} // namespace lexforge
