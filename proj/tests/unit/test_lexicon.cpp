#include "helpers.hpp"

#include "lexforge/error.hpp"
#include "lexforge/lexicon.hpp"

#include <doctest.h>

using namespace lexforge;

namespace {

constexpr auto P = Label::positive;
constexpr auto Z = Label::neutral;
constexpr auto N = Label::negative;

struct Fixture {
    Ontology ontology = Ontology::from_synsets({
        {"a1", Pos::adjective, {"good"}, "fine and pleasing", {}, {{RelationKind::antonym, "a2"}}},
        {"a2", Pos::adjective, {"bad"}, "poor and displeasing", {}, {}},
        {"a3", Pos::adjective, {"nice"}, "pleasing and fine", {}, {}},
        {"n1", Pos::noun, {"table"}, "flat furniture", {}, {}},
        {"n2", Pos::noun, {"desk"}, "furniture with a flat top", {}, {}},
    });
    std::vector<GlossDocument> docs = DocPipeline{}.build(ontology);
    Vocabulary vocab = build_vocabulary(docs);
    LabeledSeed training{{"a1", {P, 0, LabelSource::hand}}, {"a2", {N, 1, LabelSource::relation_rule}}};
    GoldStandard gold{{"n1", {Z, Provenance::agreed}}, {"a2", {Z, Provenance::adjudicated}}};

    Model model() const {
        auto data = labeled_vectors(combined_labels(training, gold), docs, vocab);
        return Model({ModelKind::knn, 1, Metric::cosine_distance, Similarity::cosine}, vocab, data);
    }
};

} // namespace

TEST_SUITE("lexicon") {
    TEST_CASE("precedence: gold, then training, then classifier") {
        Fixture f;
        auto combined = combined_labels(f.training, f.gold);
        CHECK(combined.at("a2") == Z);
        CHECK(combined.size() == 3);

        auto lex = build_lexicon(f.ontology, f.training, f.gold, f.model(), f.docs);
        CHECK(lex.entries.size() == f.ontology.size());
        CHECK(lex.entries.at("n1") == LexiconEntry{Pos::noun, Z, EntrySource::gold});
        CHECK(lex.entries.at("a2") == LexiconEntry{Pos::adjective, Z, EntrySource::gold});
        CHECK(lex.entries.at("a1") == LexiconEntry{Pos::adjective, P, EntrySource::hand_seed});
        CHECK(lex.entries.at("a3").source == EntrySource::classifier);
        CHECK(lex.entries.at("a3").label == P);
        CHECK(lex.entries.at("n2").label == Z);
        CHECK(lex.metadata.count("model"));
    }

    TEST_CASE("stats partition the lexicon") {
        Fixture f;
        auto s = lexicon_stats(build_lexicon(f.ontology, f.training, f.gold, f.model(), f.docs));
        CHECK(s.total == 5);
        std::size_t sum = 0;
        for (auto [_, n] : s.by_label) sum += n;
        CHECK(sum == 5);
        CHECK(s.by_source.at(EntrySource::classifier) == 2);

        SentimentLexicon seeds_only;
        seeds_only.entries["x"] = {Pos::noun, P, EntrySource::hand_seed};
        CHECK(lexicon_stats(seeds_only).by_source.at(EntrySource::classifier) == 0);
    }

    TEST_CASE("mismatched inputs are refused") {
        Fixture f;
        auto docs = f.docs;
        docs.pop_back();
        CHECK_THROWS_AS(build_lexicon(f.ontology, f.training, f.gold, f.model(), docs), Error);
        GoldStandard stray{{"zz", {P, Provenance::agreed}}};
        CHECK_THROWS_AS(build_lexicon(f.ontology, f.training, stray, f.model(), f.docs), Error);
        auto other = build_vocabulary(std::vector<std::vector<std::string>>{{"x"}});
        Model foreign({ModelKind::centroid, 1, Metric::cosine_distance, Similarity::cosine}, other,
                      Dataset{{vectorize({"x"}, other), P}});
        CHECK_THROWS_AS(build_lexicon(f.ontology, f.training, f.gold, foreign, f.docs), Error);
    }

    TEST_CASE("export and import") {
        testing::TempDir dir;
        Fixture f;
        auto lex = build_lexicon(f.ontology, f.training, f.gold, f.model(), f.docs);
        for (auto fmt : {LexiconFormat::tsv, LexiconFormat::jsonl}) {
            auto path = dir / (fmt == LexiconFormat::tsv ? "l.tsv" : "l.jsonl");
            CHECK(export_lexicon(lex, path, fmt) == 5);
            auto back = import_lexicon(path);
            CHECK(back.entries == lex.entries);
            CHECK(back.metadata == lex.metadata);
        }
        CHECK(text::lines(text::read_file(dir / "l.tsv")).size() == 6);
        CHECK(export_lexicon(SentimentLexicon{}, dir / "empty.tsv") == 0);
        CHECK(text::lines(text::read_file(dir / "empty.tsv")) == std::vector<std::string>{"id\tpos\tlabel\tsource"});
    }
}
