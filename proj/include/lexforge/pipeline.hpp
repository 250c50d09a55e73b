#pragma once

#include "lexforge/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lexforge {

enum class ExitStatus : int { ok = 0, config_error = 2, stage_failure = 3, awaiting_annotation = 4 };

struct StageOutcome {
    std::string name;
    bool skipped = false;
};

struct PipelineResult {
    ExitStatus status = ExitStatus::ok;
    std::vector<StageOutcome> stages;
    std::string message;
};

/// Stage order. Each stage records a manifest under `<output_dir>/manifests`.
inline const std::vector<std::string> kStageNames{"graph", "scc",  "seeds",    "annotate", "expand",
                                                  "docs",  "train", "evaluate", "lexicon"};

/// Runs graph -> scc -> seeds -> (annotation pause) -> annotate -> expand ->
/// docs -> train -> evaluate -> lexicon. A stage whose inputs, parameters
/// and outputs match its manifest is skipped. Never throws: failures are
/// reported through the status and message.
PipelineResult run_pipeline(const PipelineConfig& config);
PipelineResult run_pipeline(const std::filesystem::path& config_path);

/// Layout of pipeline artifacts under an output directory.
struct PipelineLayout {
    std::filesystem::path root;

    std::filesystem::path graph() const { return root / "graph.json"; }
    std::filesystem::path partition() const { return root / "partition.json"; }
    std::filesystem::path seeds() const { return root / "seeds.txt"; }
    std::filesystem::path seed_sheet() const { return root / "annotation" / "seed_sheet.tsv"; }
    std::filesystem::path seed_gold() const { return root / "annotation" / "seed_gold.tsv"; }
    std::filesystem::path test_gold() const { return root / "annotation" / "test_gold.tsv"; }
    std::filesystem::path agreement() const { return root / "annotation" / "agreement.json"; }
    std::filesystem::path dataset(const std::string& name) const { return root / "datasets" / (name + ".tsv"); }
    std::filesystem::path documents() const { return root / "docs.jsonl"; }
    std::filesystem::path vectors() const { return root / "vectors.txt"; }
    std::filesystem::path model(const std::string& dataset, const std::string& kind) const {
        return root / "models" / (dataset + "." + kind + ".json");
    }
    std::filesystem::path report(const std::string& dataset, const std::string& kind) const {
        return root / "runs" / (dataset + "." + kind + ".json");
    }
    std::filesystem::path summary() const { return root / "runs" / "summary.txt"; }
    std::filesystem::path lexicon_model() const { return root / "models" / "lexicon.json"; }
    std::filesystem::path lexicon() const { return root / "lexicon.tsv"; }
    std::filesystem::path manifest(const std::string& stage) const { return root / "manifests" / (stage + ".json"); }
};

} // namespace lexforge
