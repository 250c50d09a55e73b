#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "lexforge/docpipe.hpp"
#include "lexforge/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lexforge;

using Sentences = std::vector<std::vector<std::string>>;
using Tokens = std::vector<std::string>;

namespace {

class ThrowingStemmer final : public Stemmer {
public:
    std::string stem(std::string_view) const override { throw std::runtime_error("boom"); }
};

double l2(const FeatureVector& v) {
    double s = 0;
    for (auto [_, w] : v.entries) s += w * w;
    return std::sqrt(s);
}

} // namespace

TEST_SUITE("docpipe") {
    TEST_CASE("document text") {
        CHECK(synset_to_document({"x", Pos::noun, {"s1", "s2"}, "G", {"e1"}, {}}) == "G s1 s2 e1");
        CHECK(synset_to_document({"x", Pos::noun, {"s1"}, "", {}, {}}) == "s1");
        auto messy = synset_to_document({"x", Pos::noun, {"  s1 "}, "  a   gloss ", {" e1  e2 "}, {}});
        CHECK(messy.find("  ") == std::string::npos);
        CHECK(messy == "a gloss s1 e1 e2");
    }

    TEST_CASE("tokenize") {
        CHECK(tokenize("A b. C") == Sentences{{"A", "b"}, {"C"}});
        CHECK(tokenize("").empty());
        CHECK(tokenize("x, y") == Sentences{{"x", "y"}});
        CHECK(tokenize("why? yes! no.") == Sentences{{"why"}, {"yes"}, {"no"}});
        // Arabic-script question mark and full stop end sentences; ZWNJ stays inside a token
        CHECK(tokenize("\xd8\xae\xd9\x88\xd8\xa8\xd8\x9f \xd8\xa8\xd8\xaf\xdb\x94") ==
              Sentences{{"\xd8\xae\xd9\x88\xd8\xa8"}, {"\xd8\xa8\xd8\xaf"}});
        CHECK(tokenize("\xd9\x85\xdb\x8c\xe2\x80\x8c\xd8\xb1\xd9\x88\xd9\x85") ==
              Sentences{{"\xd9\x85\xdb\x8c\xe2\x80\x8c\xd8\xb1\xd9\x88\xd9\x85"}});
    }

    TEST_CASE("normalize") {
        IdentityStemmer id;
        ConstantTagger noun("noun");
        CHECK(normalize({"a", "b"}, id, &noun, {"noun"}) == Tokens{"a", "b"});
        CHECK(normalize({"a", "b"}, id, &noun, {"adjective"}).empty());
        CHECK(normalize({"a", "b"}, id, nullptr, {"adjective"}) == Tokens{"a", "b"});

        SuffixStemmer s({{"ness", ""}, {"s", ""}});
        CHECK(s.stem("goodness") == "good");
        CHECK(s.stem("s") == "s");
        CHECK(s.stem("days") == "day");

        LexiconTagger lex({{"the", "det"}, {"good", "adjective"}});
        CHECK(normalize({"the", "goodness", "unknown"}, s, &lex, {"adjective", "noun"}) == Tokens{"good", "unknown"});

        ThrowingStemmer bad;
        CHECK_THROWS_WITH_AS(normalize({"tok"}, bad, nullptr, {}), doctest::Contains("tok"), Error);
    }

    TEST_CASE("plugin files") {
        testing::TempDir dir;
        auto rules = dir.write("rules.tsv", "ness\t\nies\ty\n");
        CHECK(SuffixStemmer::from_file(rules).stem("stories") == "story");
        auto lex = dir.write("lex.tsv", "run\tverb\n");
        CHECK(LexiconTagger::from_file(lex).tag("run") == "verb");
        CHECK_FALSE(LexiconTagger::from_file(lex).tag("walk"));
        auto pipe = load_doc_pipeline(rules, lex, {"noun"});
        auto doc = pipe.make_document({"x", Pos::noun, {"kindness"}, "they run", {}, {}});
        CHECK(doc.tokens == Tokens{"they", "kind"});
    }

    TEST_CASE("vocabulary") {
        auto v = build_vocabulary(Sentences{{"a", "b"}, {"b"}});
        CHECK(v.terms() == Tokens{"a", "b"});
        CHECK(v.document_frequency() == std::vector<std::size_t>{1, 2});
        CHECK(v.documents() == 2);
        auto e = build_vocabulary(Sentences{{}});
        CHECK(e.size() == 0);
        CHECK(e.documents() == 1);
        CHECK(build_vocabulary(Sentences{{"a", "a"}}).document_frequency() == std::vector<std::size_t>{1});
        CHECK_THROWS_AS(build_vocabulary(Sentences{}), Error);
        CHECK(v.checksum() == build_vocabulary(Sentences{{"b", "a"}, {"b"}}).checksum());
        CHECK(v.checksum() != e.checksum());
    }

    TEST_CASE("tf-idf") {
        auto all = build_vocabulary(Sentences{{"t"}, {"t", "u"}});
        CHECK(all.idf(*all.index("t")) == doctest::Approx(1.0).epsilon(1e-15));

        auto one = vectorize({"u"}, all);
        REQUIRE(one.entries.size() == 1);
        CHECK(one.entries[0].second == doctest::Approx(1.0).epsilon(1e-15));

        auto v = build_vocabulary(Sentences{{"a", "b"}, {"b"}});
        auto f = vectorize({"a", "a", "b"}, v);
        const double a = 2.0 * (std::log(1.5) + 1.0), b = 1.0, n = std::sqrt(a * a + b * b);
        REQUIRE(f.entries.size() == 2);
        CHECK(std::abs(f.entries[0].second - a / n) < 1e-9);
        CHECK(std::abs(f.entries[1].second - b / n) < 1e-9);
        CHECK(vectorize({"zzz"}, v).empty());
    }

    TEST_CASE("random documents: unit norm, duplication invariance, oracle weights") {
        std::mt19937_64 rng(8);
        const Tokens words{"a", "b", "c", "d", "e", "f", "g", "h"};
        for (int t = 0; t < 100; ++t) {
            Sentences corpus(1 + rng() % 6);
            for (auto& d : corpus)
                for (std::size_t i = rng() % 7; i > 0; --i) d.push_back(words[rng() % words.size()]);
            auto vocab = build_vocabulary(corpus);
            Tokens doc;
            for (std::size_t i = rng() % 9; i > 0; --i) doc.push_back(words[rng() % words.size()]);
            auto f = vectorize(doc, vocab);
            if (!f.empty()) REQUIRE(std::abs(l2(f) - 1.0) < 1e-9);
            Tokens twice = doc;
            twice.insert(twice.end(), doc.begin(), doc.end());
            auto g = vectorize(twice, vocab);
            REQUIRE(g.entries.size() == f.entries.size());
            for (std::size_t i = 0; i < f.entries.size(); ++i)
                REQUIRE(std::abs(g.entries[i].second - f.entries[i].second) < 1e-12);
            auto expect = oracle::tfidf(corpus, doc);
            REQUIRE(expect.size() == f.entries.size());
            for (auto [idx, w] : f.entries) REQUIRE(std::abs(expect.at(vocab.terms()[idx]) - w) < 1e-9);
        }
    }

    TEST_CASE("document files") {
        testing::TempDir dir;
        std::vector<GlossDocument> docs{{"x", "t u", {"t", "u"}, Label::positive}, {"y", "", {}, std::nullopt}};
        write_documents(docs, dir / "d.jsonl");
        auto back = read_documents(dir / "d.jsonl");
        REQUIRE(back.size() == 2);
        CHECK(back[0].tokens == docs[0].tokens);
        CHECK(back[0].label == Label::positive);
        CHECK_FALSE(back[1].label);
        auto text = format_vectors({vectorize({"a"}, build_vocabulary(Sentences{{"a"}}), "x")});
        CHECK(text == "x\t0:1\n");
    }

    TEST_CASE("toy documents") {
        auto o = load_ontology(testing::toy("ontology.jsonl"));
        auto pipe = load_doc_pipeline(testing::toy("stemmer.tsv"), testing::toy("tagger.tsv"), {"noun", "adjective"});
        auto docs = pipe.build(o);
        CHECK(docs.size() == o.size());
        for (const auto& d : docs)
            for (const auto& tok : d.tokens) CHECK(tok != "the");
    }
}
