#include "helpers.hpp"

#include "lexforge/error.hpp"
#include "lexforge/ontology.hpp"

#include <doctest.h>

#include <sstream>

using namespace lexforge;

namespace {

const char* kThree =
    R"({"id":"a1","pos":"adjective","senses":["good"],"gloss":"fine","examples":["a good day"],"relations":[{"kind":"antonym","target":"a2"}]})"
    "\n"
    R"({"id":"a2","pos":"adjective","senses":["bad"],"gloss":"not fine","examples":[],"relations":[]})"
    "\n"
    R"({"id":"n1","pos":"noun","senses":["day","daytime"],"gloss":"time of light","examples":[],"relations":[{"kind":"hypernym","target":"a1"}]})"
    "\n";

Ontology parse(const std::string& s, LoadMode mode = LoadMode::strict) {
    std::istringstream in(s);
    return parse_ontology(in, mode, "test");
}

} // namespace

TEST_SUITE("ontology") {
    TEST_CASE("three records load and re-serialize identically") {
        auto o = parse(kThree);
        CHECK(o.size() == 3);
        std::ostringstream out;
        write_ontology(o, out);
        CHECK(out.str() == kThree);
        CHECK(o.at("n1").senses == std::vector<std::string>{"day", "daytime"});
        CHECK(o.at("a1").relations.front() == Relation{RelationKind::antonym, "a2"});
    }

    TEST_CASE("dangling relation: strict throws naming the id, lenient drops with one warning") {
        std::string rec =
            R"({"id":"x","pos":"noun","senses":["x"],"gloss":"","examples":[],"relations":[{"kind":"antonym","target":"ghost"}]})"
            "\n";
        try {
            parse(rec);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("ghost") != std::string::npos);
        }
        auto o = parse(rec, LoadMode::lenient);
        CHECK(o.size() == 1);
        CHECK(o.at("x").relations.empty());
        CHECK(o.metadata().warnings.size() == 1);
    }

    TEST_CASE("malformed input reports the line") {
        std::string bad = std::string(kThree) + "{not json\n";
        try {
            parse(bad);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
        }
        CHECK_THROWS_AS(parse(R"({"id":"q","pos":"pronoun","senses":["q"],"gloss":"","examples":[],"relations":[]})"),
                        ParseError);
    }

    TEST_CASE("unknown relation kind is strict-only") {
        std::string rec =
            R"({"id":"p","pos":"verb","senses":["p"],"gloss":"","examples":[],"relations":[{"kind":"meronym","target":"p2"}]})"
            "\n"
            R"({"id":"p2","pos":"verb","senses":["q"],"gloss":"","examples":[],"relations":[]})"
            "\n";
        CHECK_THROWS_AS(parse(rec), ParseError);
        auto o = parse(rec, LoadMode::lenient);
        CHECK(o.size() == 2);
        CHECK(o.metadata().warnings.size() == 1);
    }

    TEST_CASE("duplicate ids and self loops are rejected") {
        Synset s{"d", Pos::noun, {"d"}, "", {}, {}};
        CHECK_THROWS_AS(Ontology::from_synsets({s, s}), Error);
        Synset loop{"l", Pos::noun, {"l"}, "", {}, {{RelationKind::synonym, "l"}}};
        CHECK_THROWS_AS(Ontology::from_synsets({loop}), Error);
        CHECK(Ontology::from_synsets({loop}, LoadMode::lenient).at("l").relations.empty());
    }

    TEST_CASE("stats") {
        auto empty = ontology_stats(Ontology{});
        CHECK(empty.synsets == 0);
        CHECK(empty.relations == 0);
        for (auto p : kAllPos) CHECK(empty.by_pos.at(p) == 0);

        auto s = ontology_stats(parse(kThree));
        CHECK(s.by_pos.at(Pos::adjective) == 2);
        CHECK(s.by_pos.at(Pos::noun) == 1);
        CHECK(s.by_relation.at(RelationKind::antonym) == 1);
        CHECK(s.relations == 2);

        std::vector<Synset> four;
        for (int i = 0; i < 5; ++i) four.push_back({"s" + std::to_string(i), Pos::adjective, {"w"}, "", {}, {}});
        for (int i = 0; i < 4; ++i) four[i].relations.push_back({RelationKind::antonym, "s" + std::to_string(i + 1)});
        CHECK(ontology_stats(Ontology::from_synsets(four)).by_relation.at(RelationKind::antonym) == 4);
    }

    TEST_CASE("file round trip") {
        testing::TempDir dir;
        auto o = parse(kThree);
        save_ontology(o, dir / "o.jsonl");
        CHECK(load_ontology(dir / "o.jsonl") == o);
        CHECK_THROWS_AS(load_ontology(dir / "missing.jsonl"), Error);
    }

    TEST_CASE("toy fixture is valid") {
        auto o = load_ontology(testing::toy("ontology.jsonl"));
        CHECK(o.size() == 47);
        CHECK(o.metadata().warnings.empty());
    }
}
