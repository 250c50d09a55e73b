#include "helpers.hpp"

#include "lexforge/error.hpp"
#include "lexforge/evaluate.hpp"

#include <doctest.h>

#include <random>

using namespace lexforge;

namespace {

constexpr auto P = Label::positive;
constexpr auto Z = Label::neutral;
constexpr auto N = Label::negative;

RunEntry run(std::string ds, std::string cls, int c, Algorithm a, double f) {
    RunEntry e{std::move(ds), std::move(cls), c, a, {}};
    e.report.macro_f = f;
    return e;
}

} // namespace

TEST_SUITE("evaluate") {
    TEST_CASE("perfect predictions") {
        std::vector<Label> g{P, Z, N, P};
        auto r = score_labels(g, g);
        CHECK(r.accuracy == 1.0);
        CHECK(r.macro_f == 1.0);
        CHECK(r.count == 4);
    }

    TEST_CASE("all-neutral predictions on a balanced gold set") {
        auto r = score_labels({P, P, Z, Z, N, N}, {Z, Z, Z, Z, Z, Z});
        CHECK(r.accuracy == 1.0 / 3.0);
        CHECK(r.macro_f == 1.0 / 6.0);
        CHECK(r.per_category[label_index(Z)].precision == doctest::Approx(1.0 / 3.0));
        CHECK(r.per_category[label_index(Z)].recall == 1.0);
        CHECK(r.per_category[label_index(P)].f1 == 0.0);
        CHECK_FALSE(r.warnings.empty());
        CHECK(r.confusion[label_index(P)][label_index(Z)] == 2);
    }

    TEST_CASE("confusion totals equal the item count") {
        std::mt19937_64 rng(2);
        for (int t = 0; t < 100; ++t) {
            std::vector<Label> g, p;
            for (std::size_t i = rng() % 30 + 1; i > 0; --i) {
                g.push_back(kLabelOrder[rng() % 3]);
                p.push_back(kLabelOrder[rng() % 3]);
            }
            auto r = score_labels(g, p);
            std::size_t total = 0;
            for (const auto& row : r.confusion)
                for (auto c : row) total += c;
            REQUIRE(total == g.size());
            REQUIRE(r.count == g.size());
            REQUIRE(r.macro_f >= 0.0);
            REQUIRE(r.macro_f <= 1.0);
        }
    }

    TEST_CASE("evaluate by id") {
        GoldStandard gold{{"a", {P, Provenance::agreed}}, {"b", {N, Provenance::adjudicated}}};
        auto r = evaluate({{"a", P}, {"b", P}, {"extra", N}}, gold);
        CHECK(r.count == 2);
        CHECK(r.accuracy == 0.5);
        CHECK_THROWS_WITH_AS(evaluate({{"a", P}}, gold), doctest::Contains("b"), Error);
        CHECK_THROWS_AS(score_labels({P}, {}), Error);
    }

    TEST_CASE("aggregation") {
        RunMatrix m{run("Data-1", "knn", 1, Algorithm::default_rules, 0.4),
                    run("Data-2", "knn", 1, Algorithm::pmi, 0.6),
                    run("Data-3", "centroid", 2, Algorithm::default_rules, 0.6)};
        auto by_case = aggregate_by(m, Grouping::expansion_case);
        CHECK(by_case.at("1") == doctest::Approx(0.5));
        CHECK(by_case.at("2") == doctest::Approx(0.6));
        auto by_alg = aggregate_by(m, Grouping::algorithm);
        CHECK(by_alg.at("default") == doctest::Approx(0.5));
        CHECK(by_alg.at("pmi") == doctest::Approx(0.6));
        CHECK(aggregate_by(m, Grouping::classifier).size() == 2);
        CHECK_THROWS_AS(aggregate_by({}, Grouping::classifier), Error);
        CHECK(parse_grouping("case") == Grouping::expansion_case);
    }

    TEST_CASE("reports round trip and load as a matrix") {
        testing::TempDir dir;
        RunEntry e{"Data-5", "knn", 3, Algorithm::default_rules, score_labels({P, N, Z}, {P, Z, Z})};
        auto json = report_to_json(e);
        auto back = report_from_json(json);
        CHECK(back.dataset == "Data-5");
        CHECK(back.report.confusion == e.report.confusion);
        CHECK(back.report.macro_f == e.report.macro_f);
        text::write_file(dir / "Data-5.knn.json", json);
        text::write_file(dir / "other.json", "{\"note\": 1}");
        CHECK(load_run_matrix(dir.path()).size() == 1);
        CHECK(format_matrix({e}).find("Data-5") != std::string::npos);

        write_predictions({{"a", P}}, dir / "p.tsv");
        CHECK(read_predictions(dir / "p.tsv") == Predictions{{"a", P}});
    }
}
