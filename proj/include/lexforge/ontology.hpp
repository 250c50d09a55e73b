#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

enum class Pos { noun, verb, adjective, adverb };
enum class RelationKind { antonym, synonym, hypernym, hyponym };

inline constexpr Pos kAllPos[] = {Pos::noun, Pos::verb, Pos::adjective, Pos::adverb};
inline constexpr RelationKind kAllRelationKinds[] = {RelationKind::antonym, RelationKind::synonym,
                                                     RelationKind::hypernym, RelationKind::hyponym};

std::string_view to_string(Pos p) noexcept;
std::string_view to_string(RelationKind k) noexcept;
std::optional<Pos> parse_pos(std::string_view s) noexcept;
std::optional<RelationKind> parse_relation_kind(std::string_view s) noexcept;

/// Kind of the edge that mirrors (u, v) as (v, u): antonym/synonym are
/// symmetric, hypernym and hyponym swap.
RelationKind inverse(RelationKind k) noexcept;

struct Relation {
    RelationKind kind{};
    std::string target;

    friend bool operator==(const Relation&, const Relation&) = default;
};

struct Synset {
    std::string id;
    Pos pos{};
    std::vector<std::string> senses;
    std::string gloss;
    std::vector<std::string> examples;
    std::vector<Relation> relations;

    friend bool operator==(const Synset&, const Synset&) = default;
};

enum class LoadMode { strict, lenient };

struct OntologyMetadata {
    std::string source;
    std::size_t record_count = 0;
    std::vector<std::string> warnings;
};

/// Immutable id-keyed synset store. Iteration is in id order.
class Ontology {
public:
    using Map = std::map<std::string, Synset, std::less<>>;

    Ontology() = default;

    /// Validates and indexes `synsets`. Strict mode throws on any dangling,
    /// self-referencing relation; lenient mode drops it and records a warning.
    static Ontology from_synsets(std::vector<Synset> synsets, LoadMode mode = LoadMode::strict,
                                 std::string source = "<memory>", std::vector<std::string> warnings = {});

    const Synset* find(std::string_view id) const;
    const Synset& at(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    std::size_t size() const noexcept { return synsets_.size(); }
    bool empty() const noexcept { return synsets_.empty(); }
    Map::const_iterator begin() const { return synsets_.begin(); }
    Map::const_iterator end() const { return synsets_.end(); }

    std::vector<std::string> ids() const;
    const OntologyMetadata& metadata() const noexcept { return meta_; }

    friend bool operator==(const Ontology& a, const Ontology& b) { return a.synsets_ == b.synsets_; }

private:
    Map synsets_;
    OntologyMetadata meta_;
};

Ontology load_ontology(const std::filesystem::path& path, LoadMode mode = LoadMode::strict);
Ontology parse_ontology(std::istream& in, LoadMode mode = LoadMode::strict, std::string source = "<stream>");

/// One JSON Lines record with fixed field order (id, pos, senses, gloss, examples, relations).
std::string serialize_synset(const Synset& s);
void write_ontology(const Ontology& o, std::ostream& out);
void save_ontology(const Ontology& o, const std::filesystem::path& path);

struct OntologyStats {
    std::map<Pos, std::size_t> by_pos;
    std::map<RelationKind, std::size_t> by_relation;
    std::size_t synsets = 0;
    std::size_t relations = 0;
};

OntologyStats ontology_stats(const Ontology& o);

} // namespace lexforge
