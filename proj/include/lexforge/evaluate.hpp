#pragma once

#include "lexforge/annotation.hpp"
#include "lexforge/expansion.hpp"
#include "lexforge/label.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

struct CategoryScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Rows are gold, columns predicted, both in kLabelOrder.
using ConfusionMatrix = std::array<std::array<std::size_t, 3>, 3>;

struct EvalReport {
    ConfusionMatrix confusion{};
    double accuracy = 0.0;
    std::array<CategoryScores, 3> per_category{};
    /// Unweighted mean of the three per-category F1 values.
    double macro_f = 0.0;
    std::size_t count = 0;
    std::vector<std::string> warnings;
};

/// Pairwise scoring of aligned gold/predicted sequences.
EvalReport score_labels(const std::vector<Label>& gold, const std::vector<Label>& predicted);

using Predictions = std::map<std::string, Label, std::less<>>;

/// Scores every gold id; throws listing gold ids that have no prediction.
EvalReport evaluate(const Predictions& predictions, const GoldStandard& gold);

enum class ScoreKind { accuracy, macro_f };
std::optional<ScoreKind> parse_score_kind(std::string_view s) noexcept;
std::string_view to_string(ScoreKind s) noexcept;
double score_value(const EvalReport& report, ScoreKind kind) noexcept;

struct RunEntry {
    std::string dataset;
    std::string classifier;
    int expansion_case = 0;
    Algorithm algorithm = Algorithm::default_rules;
    EvalReport report;
};

using RunMatrix = std::vector<RunEntry>;

enum class Grouping { algorithm, expansion_case, classifier };
std::optional<Grouping> parse_grouping(std::string_view s) noexcept;

/// Mean macro-F per group.
std::map<std::string, double> aggregate_by(const RunMatrix& matrix, Grouping grouping);

std::string report_to_json(const RunEntry& entry);
RunEntry report_from_json(std::string_view json);
RunMatrix load_run_matrix(const std::filesystem::path& dir);

std::string format_report(const RunEntry& entry);
/// Datasets as rows, accuracy/F per classifier as columns.
std::string format_matrix(const RunMatrix& matrix);
std::string format_aggregate(const std::map<std::string, double>& groups, std::string_view title);

/// TSV `id<TAB>label`.
void write_predictions(const Predictions& predictions, const std::filesystem::path& path);
Predictions read_predictions(const std::filesystem::path& path);

} // namespace lexforge
