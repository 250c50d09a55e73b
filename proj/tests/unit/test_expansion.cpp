#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "lexforge/annotation.hpp"
#include "lexforge/error.hpp"
#include "lexforge/expansion.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lexforge;

namespace {

constexpr auto P = Label::positive;
constexpr auto Z = Label::neutral;
constexpr auto N = Label::negative;

Synset syn(std::string id, Pos pos, std::vector<Relation> rel = {}, std::vector<std::string> senses = {"w"}) {
    return {std::move(id), pos, std::move(senses), "", {}, std::move(rel)};
}

LabeledSeed hand(std::map<std::string, Label> labels) {
    LabeledSeed s;
    for (auto [id, l] : labels) s.emplace(id, SeedEntry{l, 0, LabelSource::hand});
    return s;
}

NGramCounts counts(std::map<std::string, std::uint64_t> uni, std::map<std::pair<std::string, std::string>, std::uint64_t> bi,
                   std::uint64_t total) {
    NGramCounts c;
    for (auto& [k, v] : uni) c.unigrams.emplace(k, v);
    c.bigrams = std::move(bi);
    c.total_tokens = total;
    return c;
}

std::map<std::string, oracle::Labelled> as_oracle(const LabeledSeed& s) {
    std::map<std::string, oracle::Labelled> out;
    for (const auto& [id, e] : s) out[id] = {e.label, e.round};
    return out;
}

bool same(const std::map<std::string, oracle::Labelled>& a, const std::map<std::string, oracle::Labelled>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [id, x] : a) {
        auto it = b.find(id);
        if (it == b.end() || it->second.label != x.label || it->second.round != x.round) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("expansion") {
    TEST_CASE("count files") {
        testing::TempDir dir;
        auto u = dir.write("u.tsv", "#total\t1000\ngood\t20\n");
        auto b = dir.write("b.tsv", "good day\t3\n");
        auto c = load_counts(u, b);
        CHECK(c.unigram("good") == 20);
        CHECK(c.total_tokens == 1000);
        CHECK(c.cooccurrence("day", "good") == 3);

        auto e1 = dir.write("e1.tsv", ""), e2 = dir.write("e2.tsv", "");
        auto empty = load_counts(e1, e2);
        CHECK(empty.unigrams.empty());
        CHECK(empty.total_tokens == 0);

        auto neg = dir.write("neg.tsv", "good\t20\nx\t-3\n");
        try {
            load_counts(neg, e2);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }

    TEST_CASE("relation rules") {
        CHECK(implied_label(P, RelationKind::antonym) == N);
        CHECK(implied_label(Z, RelationKind::antonym) == Z);
        CHECK(implied_label(N, RelationKind::hypernym) == N);
        CHECK(implied_label(P, RelationKind::synonym) == P);
    }

    TEST_CASE("pmi hand fixtures") {
        auto c = counts({{"t", 10}, {"good", 20}}, {{{"t", "good"}, 4}}, 1000);
        auto v = pmi("t", "good", c);
        REQUIRE(v);
        CHECK(std::abs(*v - std::log2(20.0)) < 1e-9);
        CHECK(*v == doctest::Approx(4.3219).epsilon(1e-4));
        CHECK_FALSE(pmi("t", "bad", c));

        auto z = counts({{"a", 10}, {"b", 10}}, {{{"a", "b"}, 1}}, 100);
        CHECK(std::abs(*pmi("a", "b", z)) < 1e-12);
        CHECK(*pmi("b", "a", z) == *pmi("a", "b", z));
    }

    TEST_CASE("so-pmi") {
        ExpansionConfig cfg;
        // pmi(t, good) = log2(20), pmi(t, bad) = log2(2) = 1
        auto c = counts({{"t", 10}, {"good", 20}, {"bad", 50}}, {{{"t", "good"}, 4}, {{"t", "bad"}, 1}}, 1000);
        CHECK(std::abs(*so_pmi("t", cfg, c) - (std::log2(20.0) - 1.0)) < 1e-9);

        auto sym = counts({{"t", 10}, {"good", 20}, {"bad", 20}}, {{{"t", "good"}, 4}, {{"bad", "t"}, 4}}, 1000);
        CHECK(*so_pmi("t", cfg, sym) == 0.0);

        auto missing = counts({{"t", 10}, {"good", 20}, {"bad", 20}}, {{{"t", "good"}, 4}}, 1000);
        CHECK_FALSE(so_pmi("t", cfg, missing));
    }

    TEST_CASE("synset polarity is a sign sum") {
        ExpansionConfig cfg;
        auto c = counts({{"s1", 10}, {"s2", 10}, {"s3", 10}, {"good", 100}, {"bad", 100}},
                        {{{"s1", "good"}, 9}, {{"s1", "bad"}, 1}, {{"s2", "good"}, 3}, {{"s2", "bad"}, 2},
                         {{"s3", "good"}, 1}, {{"s3", "bad"}, 2}},
                        10000);
        CHECK(synset_pmi_polarity(syn("x", Pos::adjective, {}, {"s1", "s2", "s3"}), cfg, c) == 1);
        CHECK_FALSE(synset_pmi_polarity(syn("x", Pos::adjective, {}, {"zz"}), cfg, c));
        CHECK_FALSE(synset_pmi_polarity(syn("x", Pos::adjective, {}, {"s1", "s3"}), cfg, c));
    }

    TEST_CASE("antonym chain") {
        auto o = Ontology::from_synsets({syn("A", Pos::adjective, {{RelationKind::antonym, "B"}}),
                                         syn("B", Pos::adjective, {{RelationKind::antonym, "C"}}),
                                         syn("C", Pos::adjective)});
        auto out = expand(o, hand({{"A", P}}), ExpansionConfig::preset(1));
        CHECK(out.at("B") == SeedEntry{N, 1, LabelSource::relation_rule});
        CHECK(out.at("C") == SeedEntry{P, 2, LabelSource::relation_rule});

        auto one = ExpansionConfig::preset(1);
        one.max_rounds = 1;
        CHECK_FALSE(expand(o, hand({{"A", P}}), one).contains("C"));
        CHECK(expand(o, {}, one).empty());
    }

    TEST_CASE("case 3 never crosses into other parts of speech") {
        auto o = Ontology::from_synsets({syn("A", Pos::adjective, {{RelationKind::antonym, "N1"}}), syn("N1", Pos::noun)});
        auto out = expand(o, hand({{"A", P}}), ExpansionConfig::preset(3));
        CHECK_FALSE(out.contains("N1"));
        CHECK(expand(o, hand({{"A", P}}), ExpansionConfig::preset(1)).at("N1").label == N);

        auto nouns = Ontology::from_synsets({syn("n1", Pos::noun, {{RelationKind::antonym, "n2"}}), syn("n2", Pos::noun)});
        CHECK(expand(nouns, hand({{"n1", P}}), ExpansionConfig::preset(3)) == hand({{"n1", P}}));
    }

    TEST_CASE("conflicting neighbours cancel to neutral; neutral propagation is switchable") {
        auto o = Ontology::from_synsets({syn("A", Pos::adjective, {{RelationKind::synonym, "C"}}),
                                         syn("B", Pos::adjective, {{RelationKind::synonym, "C"}}),
                                         syn("C", Pos::adjective)});
        ExpansionConfig cfg;
        cfg.relation_kinds = {RelationKind::synonym};
        CHECK(expand(o, hand({{"A", P}, {"B", N}}), cfg).at("C").label == Z);
        cfg.propagate_neutral = false;
        CHECK(expand(o, hand({{"A", Z}, {"B", N}}), cfg).at("C").label == N);
    }

    TEST_CASE("seed validation") {
        auto o = Ontology::from_synsets({syn("A", Pos::adjective)});
        CHECK_THROWS_AS(expand(o, hand({{"Q", P}}), ExpansionConfig{}), Error);
        LabeledSeed late{{"A", {P, 2, LabelSource::relation_rule}}};
        CHECK_THROWS_AS(expand(o, late, ExpansionConfig{}), Error);
        CHECK_THROWS_AS(expand(o, hand({{"A", P}}), ExpansionConfig::preset(1, Algorithm::pmi)), Error);
    }

    TEST_CASE("toy matrix") {
        auto o = load_ontology(testing::toy("ontology.jsonl"));
        auto c = load_counts(testing::toy("unigrams.tsv"), testing::toy("bigrams.tsv"));
        auto set = import_annotations({testing::toy("annotation/seed_annotator1.tsv"),
                                       testing::toy("annotation/seed_annotator2.tsv")});
        auto seed = seed_from_gold(adjudicate(set, read_tiebreak(testing::toy("annotation/seed_tiebreak.tsv"))));
        auto m = generate_training_matrix(o, seed, &c);
        REQUIRE(m.size() == 6);
        for (int i = 0; i < 6; ++i) {
            CHECK(m[i].name == "Data-" + std::to_string(i + 1));
            CHECK(m[i].expansion_case == i / 2 + 1);
            CHECK(m[i].config.algorithm == (i % 2 ? Algorithm::pmi : Algorithm::default_rules));
            std::map<std::string, Label> s;
            for (const auto& [id, e] : seed) s[id] = e.label;
            CHECK(same(as_oracle(m[i].labels), oracle::expand(o, s, m[i].config, &c)));
        }
        for (int pair = 0; pair < 3; ++pair)
            for (const auto& [id, e] : m[2 * pair].labels)
                if (e.round <= 1) CHECK(m[2 * pair + 1].labels.at(id) == e);
        for (const auto& [id, _] : m[4].labels) CHECK(m[2].labels.contains(id));
        // the pmi variant of case 2 overrides at least one round-2 label in the fixture
        CHECK(m[2].labels.at("adj.joyful").label != m[3].labels.at("adj.joyful").label);
    }

    TEST_CASE("random ontologies agree with the brute-force oracle") {
        std::mt19937_64 rng(21);
        const std::vector<std::string> words{"good", "bad", "w0", "w1", "w2", "w3"};
        for (int t = 0; t < 150; ++t) {
            std::size_t n = 2 + rng() % 12;
            std::vector<Synset> synsets;
            for (std::size_t i = 0; i < n; ++i)
                synsets.push_back(syn("s" + std::to_string(10 + i), rng() % 3 ? Pos::adjective : Pos::noun, {},
                                      {words[2 + rng() % 4]}));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && rng() % 6 == 0)
                        synsets[i].relations.push_back({kAllRelationKinds[rng() % 4], synsets[j].id});
            auto o = Ontology::from_synsets(synsets);
            NGramCounts c;
            for (const auto& w : words) c.unigrams[w] = 1 + rng() % 50;
            for (std::size_t i = 2; i < words.size(); ++i) {
                if (rng() % 4) c.bigrams[{words[i], "good"}] = 1 + rng() % 9;
                if (rng() % 4) c.bigrams[{"bad", words[i]}] = 1 + rng() % 9;
            }
            c.total_tokens = 1000;
            std::map<std::string, Label> s;
            for (std::size_t i = 0; i < n; ++i)
                if (rng() % 4 == 0) s[synsets[i].id] = kLabelOrder[rng() % 3];
            for (int cs = 1; cs <= 3; ++cs)
                for (auto alg : {Algorithm::default_rules, Algorithm::pmi}) {
                    auto cfg = ExpansionConfig::preset(cs, alg);
                    cfg.propagate_neutral = rng() % 2;
                    LabeledSeed seed;
                    for (auto [id, l] : s) seed.emplace(id, SeedEntry{l, 0, LabelSource::hand});
                    REQUIRE(same(as_oracle(expand(o, seed, cfg, &c)), oracle::expand(o, s, cfg, &c)));
                }
        }
    }

    TEST_CASE("dataset files") {
        testing::TempDir dir;
        auto o = Ontology::from_synsets({syn("A", Pos::adjective, {{RelationKind::antonym, "B"}}), syn("B", Pos::adjective)});
        auto cfg = ExpansionConfig::preset(3);
        TrainingDataset d{"Data-5", 3, cfg, expand(o, hand({{"A", P}}), cfg)};
        write_dataset(d, dir / "d.tsv");
        auto back = read_dataset(dir / "d.tsv");
        CHECK(back.name == d.name);
        CHECK(back.expansion_case == 3);
        CHECK(back.config == d.config);
        CHECK(back.labels == d.labels);
        CHECK(read_seed(dir / "d.tsv") == d.labels);

        write_gold({{"A", {N, Provenance::agreed}}}, dir / "g.tsv");
        CHECK(read_seed(dir / "g.tsv") == hand({{"A", N}}));
        CHECK(ExpansionConfig::preset(2).case_number() == 2);
    }
}
