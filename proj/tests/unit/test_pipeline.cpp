#include "helpers.hpp"

#include "lexforge/pipeline.hpp"

#include <doctest.h>

using namespace lexforge;
namespace fs = std::filesystem;

namespace {

PipelineConfig toy_config(const fs::path& out) {
    auto c = PipelineConfig::from_file(testing::toy("project.toml"));
    c.output_dir = out;
    return c;
}

} // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("full run, then a rerun that skips every stage") {
        testing::TempDir dir;
        auto r = run_pipeline(toy_config(dir.path()));
        REQUIRE_MESSAGE(r.status == ExitStatus::ok, r.message);
        REQUIRE(r.stages.size() == kStageNames.size());
        for (std::size_t i = 0; i < r.stages.size(); ++i) {
            CHECK(r.stages[i].name == kStageNames[i]);
            CHECK_FALSE(r.stages[i].skipped);
        }
        PipelineLayout out{dir.path()};
        auto before = text::read_file(out.lexicon());
        auto again = run_pipeline(toy_config(dir.path()));
        CHECK(again.status == ExitStatus::ok);
        for (const auto& s : again.stages) CHECK(s.skipped);
        CHECK(text::read_file(out.lexicon()) == before);
        for (const auto& s : kStageNames) CHECK(fs::exists(out.manifest(s)));
    }

    TEST_CASE("a changed input reruns from the affected stage") {
        testing::TempDir dir;
        auto cfg = toy_config(dir.path());
        REQUIRE(run_pipeline(cfg).status == ExitStatus::ok);
        cfg.folds = 2;
        auto r = run_pipeline(cfg);
        REQUIRE(r.status == ExitStatus::ok);
        for (const auto& s : r.stages) {
            bool upstream = s.name == "graph" || s.name == "scc" || s.name == "seeds" || s.name == "annotate" ||
                            s.name == "expand" || s.name == "docs";
            CHECK_MESSAGE(s.skipped == upstream, s.name);
        }
    }

    TEST_CASE("missing sheets pause after seed export") {
        testing::TempDir dir;
        auto cfg = toy_config(dir.path());
        cfg.seed_sheets = {dir / "not-yet.tsv"};
        auto r = run_pipeline(cfg);
        CHECK(r.status == ExitStatus::awaiting_annotation);
        CHECK(r.message.find("seed_sheet.tsv") != std::string::npos);
        CHECK(r.message.find("not-yet.tsv") != std::string::npos);
        CHECK(fs::exists(PipelineLayout{dir.path()}.seed_sheet()));
        CHECK_FALSE(fs::exists(PipelineLayout{dir.path()}.dataset("Data-1")));

        cfg.seed_sheets.clear();
        cfg.gold_sheets.clear();
        CHECK(run_pipeline(cfg).status == ExitStatus::awaiting_annotation);
    }

    TEST_CASE("stage failures name the stage and keep earlier artifacts") {
        testing::TempDir dir;
        auto cfg = toy_config(dir.path());
        // gold sheets in place of seed sheets: the labelled ids are not the seed list
        cfg.seed_sheets = cfg.gold_sheets;
        cfg.seed_tiebreak = cfg.gold_tiebreak;
        auto r = run_pipeline(cfg);
        CHECK(r.status == ExitStatus::stage_failure);
        CHECK(r.message.find("annotate") != std::string::npos);
        CHECK(fs::exists(PipelineLayout{dir.path()}.seeds()));
    }

    TEST_CASE("config errors") {
        testing::TempDir dir;
        auto cfg = toy_config(dir.path());
        cfg.ontology = dir / "missing.jsonl";
        auto r = run_pipeline(cfg);
        CHECK(r.status == ExitStatus::config_error);
        CHECK(r.message.find("missing.jsonl") != std::string::npos);
        CHECK(run_pipeline(dir / "absent.toml").status == ExitStatus::config_error);
    }
}
