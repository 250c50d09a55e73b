#include "helpers.hpp"

#include "lexforge/annotation.hpp"
#include "lexforge/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace lexforge;

namespace {

constexpr auto P = Label::positive;
constexpr auto Z = Label::neutral;
constexpr auto N = Label::negative;

AnnotationSet table(const std::vector<std::vector<Label>>& rows) {
    AnnotationSet s;
    const auto raters = rows.empty() ? 0 : rows.front().size();
    for (std::size_t a = 0; a < raters; ++a) {
        s.annotators.push_back("r" + std::to_string(a));
        s.labels.emplace_back();
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto id = "S" + std::to_string(i + 1);
        s.items.push_back(id);
        for (std::size_t a = 0; a < raters; ++a) s.labels[a][id] = rows[i][a];
    }
    return s;
}

Ontology small() {
    return Ontology::from_synsets({{"S1", Pos::adjective, {"good", "fine"}, "of high\tquality", {}, {}},
                                   {"S2", Pos::noun, {"day"}, "time\nof light", {}, {}}});
}

std::string sheet(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string s = "id\tpos\tsenses\tgloss\tlabel\n";
    for (const auto& [id, label] : rows) s += id + "\tadjective\tw\tg\t" + label + "\n";
    return s;
}

} // namespace

TEST_SUITE("annotation") {
    TEST_CASE("export writes one row per seed") {
        testing::TempDir dir;
        CHECK(export_sheet({"S1", "S2"}, small(), dir / "sheet.tsv") == 2);
        auto lines = text::lines(text::read_file(dir / "sheet.tsv"));
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "id\tpos\tsenses\tgloss\tlabel");
        CHECK(text::split(lines[1], '\t').size() == 5);
        CHECK(text::split(lines[2], '\t').size() == 5);
        CHECK(export_sheet({}, small(), dir / "empty.tsv") == 0);
        CHECK(text::lines(text::read_file(dir / "empty.tsv")).size() == 1);
        try {
            export_sheet({"S9"}, small(), dir / "bad.tsv");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("S9") != std::string::npos);
        }
    }

    TEST_CASE("import") {
        testing::TempDir dir;
        auto a = dir.write("alice.tsv", sheet({{"S1", "positive"}, {"S2", "negative"}}));
        auto b = dir.write("bob.tsv", sheet({{"S1", "positive"}, {"S2", "neutral"}}));
        auto set = import_annotations({a, b});
        CHECK(set.annotators == std::vector<std::string>{"alice", "bob"});
        CHECK(set.items.size() == 2);
        CHECK(set.labels[1].at("S2") == Z);

        auto bad = dir.write("bad.tsv", sheet({{"S1", "pos"}, {"S2", "neutral"}}));
        try {
            import_annotations({bad});
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
        auto other = dir.write("carol.tsv", sheet({{"S1", "positive"}, {"S3", "neutral"}}));
        CHECK_THROWS_WITH_AS(import_annotations({a, other}), doctest::Contains("S3"), Error);
    }

    TEST_CASE("kappa: perfect agreement is exactly 1") {
        std::vector<std::vector<Label>> rows;
        for (int i = 0; i < 10; ++i) rows.push_back({i % 3 == 0 ? P : N, i % 3 == 0 ? P : N});
        CHECK(fleiss_kappa(table(rows)) == 1.0);
        CHECK(fleiss_kappa(table({{Z, Z}, {Z, Z}})) == 1.0);
        CHECK(percent_agreement(table(rows)) == 1.0);
    }

    TEST_CASE("kappa: four-item hand fixture") {
        // P_i = 1,1,0,1 -> mean 3/4; p = (3/8 neg, 2/8 neu, 3/8 pos) -> Pe = 22/64
        auto s = table({{P, P}, {N, N}, {P, N}, {Z, Z}});
        CHECK(fleiss_kappa(s) == doctest::Approx(13.0 / 21.0).epsilon(1e-12));
        CHECK(std::abs(fleiss_kappa(s) - 13.0 / 21.0) < 1e-9);
        CHECK(percent_agreement(s) == doctest::Approx(0.75));
        CHECK(disagreements(s) == std::vector<std::string>{"S3"});
    }

    TEST_CASE("kappa is invariant under annotator and item permutation") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 100; ++t) {
            std::size_t items = 2 + rng() % 12, raters = 2 + rng() % 4;
            std::vector<std::vector<Label>> rows(items, std::vector<Label>(raters));
            for (auto& r : rows)
                for (auto& l : r) l = kLabelOrder[rng() % 3];
            auto base = table(rows);
            auto k = fleiss_kappa(base);
            auto permuted = base;
            std::shuffle(permuted.items.begin(), permuted.items.end(), rng);
            std::shuffle(permuted.labels.begin(), permuted.labels.end(), rng);
            REQUIRE(fleiss_kappa(permuted) == doctest::Approx(k).epsilon(1e-12));
        }
    }

    TEST_CASE("kappa preconditions") {
        CHECK_THROWS_AS(fleiss_kappa(table({{P}})), Error);
        CHECK_THROWS_AS(fleiss_kappa(AnnotationSet{{"a", "b"}, {}, {{}, {}}}), Error);
    }

    TEST_CASE("adjudication") {
        auto agreed = table({{P, P}, {N, N}});
        auto gold = adjudicate(agreed, {});
        CHECK(gold.at("S1") == GoldEntry{P, Provenance::agreed});
        CHECK(gold.at("S2") == GoldEntry{N, Provenance::agreed});

        auto split = table({{P, P}, {Z, Z}, {P, Z}});
        auto g2 = adjudicate(split, {{"S3", N}});
        CHECK(g2.at("S3") == GoldEntry{N, Provenance::adjudicated});
        CHECK(g2.size() == 3);

        CHECK_THROWS_WITH_AS(adjudicate(split, {}), doctest::Contains("S3"), Error);

        std::vector<std::string> warnings;
        adjudicate(split, {{"S3", N}, {"S1", N}}, &warnings);
        CHECK(warnings.size() == 1);

        auto swapped = split;
        std::swap(swapped.labels[0], swapped.labels[1]);
        CHECK(adjudicate(swapped, {{"S3", N}}) == g2);
    }

    TEST_CASE("gold and tiebreak files") {
        testing::TempDir dir;
        GoldStandard g{{"a", {P, Provenance::agreed}}, {"b", {N, Provenance::adjudicated}}};
        write_gold(g, dir / "gold.tsv");
        CHECK(read_gold(dir / "gold.tsv") == g);
        auto filled = dir.write("filled.tsv", sheet({{"x", "neutral"}}));
        CHECK(read_gold(filled).at("x") == GoldEntry{Z, Provenance::agreed});
        auto tb = dir.write("tb.tsv", sheet({{"x", ""}, {"y", "negative"}}));
        CHECK(read_tiebreak(tb) == std::map<std::string, Label, std::less<>>{{"y", N}});
        CHECK(read_sheet(tb, true).size() == 2);
        CHECK_THROWS_AS(read_sheet(tb, false), ParseError);
    }

    TEST_CASE("toy sheets") {
        auto set = import_annotations({testing::toy("annotation/seed_annotator1.tsv"),
                                       testing::toy("annotation/seed_annotator2.tsv")});
        CHECK(set.items.size() == 18);
        CHECK(disagreements(set).size() == 2);
        auto gold = adjudicate(set, read_tiebreak(testing::toy("annotation/seed_tiebreak.tsv")));
        CHECK(gold.size() == 18);
    }
}
