#pragma once

#include "lexforge/classify.hpp"
#include "lexforge/evaluate.hpp"
#include "lexforge/error.hpp"
#include "lexforge/expansion.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace lexforge {

/// Invalid or unreadable pipeline configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Scalar or array value from a flat TOML-style file.
using ConfigValue = std::variant<std::string, std::int64_t, bool, std::vector<std::string>, std::vector<std::int64_t>>;

/// Parses `key = value` lines with `[section]` headers flattened into
/// `section.key`. Values: basic or literal strings, integers, booleans,
/// and arrays of strings or integers (which may span lines).
std::map<std::string, ConfigValue> parse_flat_toml(std::string_view contents, const std::string& source = "<config>");

struct PipelineConfig {
    std::filesystem::path config_path;
    std::filesystem::path ontology;
    std::filesystem::path output_dir;
    std::filesystem::path counts_unigrams;
    std::filesystem::path counts_bigrams;
    std::vector<std::filesystem::path> seed_sheets;
    std::optional<std::filesystem::path> seed_tiebreak;
    std::vector<std::filesystem::path> gold_sheets;
    std::optional<std::filesystem::path> gold_tiebreak;
    bool lenient = false;

    std::set<RelationKind> graph_relations{RelationKind::antonym};
    bool symmetrize = true;
    std::size_t min_seed_size = 2;
    bool random_seeds = false;

    ExpansionConfig expansion;

    std::optional<std::filesystem::path> stemmer_rules;
    std::optional<std::filesystem::path> tagger_lexicon;
    std::set<std::string, std::less<>> keep_pos{"noun", "adjective"};

    std::vector<ClassifierParams> knn_grid = default_grid(ModelKind::knn);
    std::vector<ClassifierParams> centroid_grid = default_grid(ModelKind::centroid);
    std::size_t folds = 10;
    ScoreKind score = ScoreKind::macro_f;
    bool shuffle_folds = false;
    std::uint64_t rng_seed = 0;

    std::string lexicon_dataset = "Data-5";
    ModelKind lexicon_classifier = ModelKind::knn;

    /// Relative paths resolve against the config file's directory.
    static PipelineConfig from_file(const std::filesystem::path& path);
    static PipelineConfig from_string(std::string_view contents, const std::filesystem::path& base_dir,
                                      const std::string& source = "<config>");

    /// `key = value` lines describing every resolved setting.
    std::vector<std::string> describe() const;
};

struct ConfigReport {
    bool ok = false;
    std::vector<std::string> resolved;
    std::vector<std::string> errors;
    /// Annotation sheets that do not exist yet (not an error).
    std::vector<std::string> pending;
};

ConfigReport validate_config(const std::filesystem::path& path);

} // namespace lexforge
