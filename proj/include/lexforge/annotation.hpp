#pragma once

#include "lexforge/label.hpp"
#include "lexforge/ontology.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lexforge {

/// Labels from several annotators over a shared, ordered item universe.
struct AnnotationSet {
    std::vector<std::string> annotators;
    std::vector<std::string> items;
    /// labels[a] maps every item to annotator a's label.
    std::vector<std::map<std::string, Label, std::less<>>> labels;
};

enum class Provenance { agreed, adjudicated };
std::string_view to_string(Provenance p) noexcept;

struct GoldEntry {
    Label label{};
    Provenance provenance{};

    friend bool operator==(const GoldEntry&, const GoldEntry&) = default;
};

using GoldStandard = std::map<std::string, GoldEntry, std::less<>>;

struct SheetRow {
    std::string id;
    std::optional<Label> label;
};

/// Writes `id pos senses gloss label` with an empty label column.
std::size_t export_sheet(const std::vector<std::string>& seeds, const Ontology& ontology,
                         const std::filesystem::path& path);

/// Reads a sheet. Unless `allow_blank`, every row must carry a label.
std::vector<SheetRow> read_sheet(const std::filesystem::path& path, bool allow_blank = false);

AnnotationSet import_annotations(const std::vector<std::filesystem::path>& paths);

/// Fleiss' kappa over the three sentiment categories.
double fleiss_kappa(const AnnotationSet& annotations);

/// Share of items on which every annotator gave the same label.
double percent_agreement(const AnnotationSet& annotations);

/// Items that are not unanimous, in universe order.
std::vector<std::string> disagreements(const AnnotationSet& annotations);

/// Unanimous items keep their label; the rest take the tiebreaker's.
/// Tiebreaker entries for agreed items are ignored and reported in `warnings`.
GoldStandard adjudicate(const AnnotationSet& annotations, const std::map<std::string, Label, std::less<>>& tiebreaker,
                        std::vector<std::string>* warnings = nullptr);

/// Tiebreak sheet: rows with a blank label are skipped.
std::map<std::string, Label, std::less<>> read_tiebreak(const std::filesystem::path& path);

void write_gold(const GoldStandard& gold, const std::filesystem::path& path);
std::string format_gold(const GoldStandard& gold);
GoldStandard read_gold(const std::filesystem::path& path);

} // namespace lexforge
