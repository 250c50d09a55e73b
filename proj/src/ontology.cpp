#include "lexforge/ontology.hpp"

#include "lexforge/error.hpp"
#include "lexforge/log.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace lexforge {

using nlohmann::ordered_json;

std::string_view to_string(Pos p) noexcept {
    switch (p) {
    case Pos::noun: return "noun";
    case Pos::verb: return "verb";
    case Pos::adjective: return "adjective";
    case Pos::adverb: return "adverb";
    }
    return "noun";
}

std::string_view to_string(RelationKind k) noexcept {
    switch (k) {
    case RelationKind::antonym: return "antonym";
    case RelationKind::synonym: return "synonym";
    case RelationKind::hypernym: return "hypernym";
    case RelationKind::hyponym: return "hyponym";
    }
    return "antonym";
}

std::optional<Pos> parse_pos(std::string_view s) noexcept {
    for (auto p : kAllPos)
        if (to_string(p) == s) return p;
    return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) noexcept {
    for (auto k : kAllRelationKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

RelationKind inverse(RelationKind k) noexcept {
    switch (k) {
    case RelationKind::hypernym: return RelationKind::hyponym;
    case RelationKind::hyponym: return RelationKind::hypernym;
    default: return k;
    }
}

Ontology Ontology::from_synsets(std::vector<Synset> synsets, LoadMode mode, std::string source,
                                std::vector<std::string> warnings) {
    Ontology o;
    o.meta_.source = std::move(source);
    o.meta_.warnings = std::move(warnings);
    o.meta_.record_count = synsets.size();

    for (auto& s : synsets) {
        if (s.id.empty()) throw Error("synset with empty id");
        if (s.senses.empty()) throw Error("synset " + s.id + " has no senses");
        for (const auto& sense : s.senses)
            if (sense.empty()) throw Error("synset " + s.id + " has an empty sense");
        std::string id = s.id;
        if (!o.synsets_.emplace(id, std::move(s)).second) throw Error("duplicate synset id " + id);
    }

    for (auto& [id, s] : o.synsets_) {
        std::vector<Relation> kept;
        kept.reserve(s.relations.size());
        for (auto& r : s.relations) {
            std::string problem;
            if (r.target == id)
                problem = "self-loop " + std::string(to_string(r.kind)) + " relation on " + id;
            else if (!o.synsets_.contains(r.target))
                problem = "dangling " + std::string(to_string(r.kind)) + " relation from " + id + " to missing id " +
                          r.target;
            if (problem.empty()) {
                kept.push_back(std::move(r));
                continue;
            }
            if (mode == LoadMode::strict) throw Error(problem);
            log().warn("dropped {}", problem);
            o.meta_.warnings.push_back("dropped " + problem);
        }
        s.relations = std::move(kept);
    }
    return o;
}

const Synset* Ontology::find(std::string_view id) const {
    auto it = synsets_.find(id);
    return it == synsets_.end() ? nullptr : &it->second;
}

const Synset& Ontology::at(std::string_view id) const {
    if (const auto* s = find(id)) return *s;
    throw Error("unknown synset id " + std::string(id));
}

std::vector<std::string> Ontology::ids() const {
    std::vector<std::string> out;
    out.reserve(synsets_.size());
    for (const auto& [id, _] : synsets_) out.push_back(id);
    return out;
}

namespace {

std::vector<std::string> string_array(const ordered_json& j, const char* field) {
    if (!j.contains(field)) return {};
    const auto& arr = j.at(field);
    if (!arr.is_array()) throw Error(std::string("field '") + field + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw Error(std::string("field '") + field + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Synset parse_record(const ordered_json& j, LoadMode mode, std::vector<std::string>& warnings) {
    if (!j.is_object()) throw Error("record is not an object");
    Synset s;
    if (!j.contains("id") || !j.at("id").is_string()) throw Error("missing string field 'id'");
    s.id = j.at("id").get<std::string>();
    if (!j.contains("pos") || !j.at("pos").is_string()) throw Error("missing string field 'pos'");
    auto pos = parse_pos(j.at("pos").get<std::string>());
    if (!pos) throw Error("unknown pos '" + j.at("pos").get<std::string>() + "'");
    s.pos = *pos;
    s.senses = string_array(j, "senses");
    if (j.contains("gloss")) {
        if (!j.at("gloss").is_string()) throw Error("field 'gloss' must be a string");
        s.gloss = j.at("gloss").get<std::string>();
    }
    s.examples = string_array(j, "examples");
    if (j.contains("relations")) {
        const auto& rels = j.at("relations");
        if (!rels.is_array()) throw Error("field 'relations' must be an array");
        for (const auto& r : rels) {
            if (!r.is_object() || !r.contains("kind") || !r.contains("target") || !r.at("kind").is_string() ||
                !r.at("target").is_string())
                throw Error("relation needs string fields 'kind' and 'target'");
            auto kind_name = r.at("kind").get<std::string>();
            auto kind = parse_relation_kind(kind_name);
            if (!kind) {
                if (mode == LoadMode::strict) throw Error("unknown relation kind '" + kind_name + "'");
                warnings.push_back("dropped relation of unknown kind '" + kind_name + "' on " + s.id);
                log().warn("{}", warnings.back());
                continue;
            }
            s.relations.push_back({*kind, r.at("target").get<std::string>()});
        }
    }
    return s;
}

} // namespace

Ontology parse_ontology(std::istream& in, LoadMode mode, std::string source) {
    std::vector<Synset> synsets;
    std::vector<std::string> warnings;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            synsets.push_back(parse_record(ordered_json::parse(line), mode, warnings));
        } catch (const ordered_json::exception& e) {
            throw ParseError(source, lineno, std::string("malformed record: ") + e.what());
        } catch (const Error& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    if (in.bad()) throw Error("read failed: " + source);
    return Ontology::from_synsets(std::move(synsets), mode, source, std::move(warnings));
}

Ontology load_ontology(const std::filesystem::path& path, LoadMode mode) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ontology " + path.string());
    return parse_ontology(in, mode, path.string());
}

std::string serialize_synset(const Synset& s) {
    ordered_json j;
    j["id"] = s.id;
    j["pos"] = to_string(s.pos);
    j["senses"] = s.senses;
    j["gloss"] = s.gloss;
    j["examples"] = s.examples;
    auto rels = ordered_json::array();
    for (const auto& r : s.relations) {
        ordered_json rj;
        rj["kind"] = to_string(r.kind);
        rj["target"] = r.target;
        rels.push_back(std::move(rj));
    }
    j["relations"] = std::move(rels);
    return j.dump();
}

void write_ontology(const Ontology& o, std::ostream& out) {
    for (const auto& [_, s] : o) out << serialize_synset(s) << '\n';
}

void save_ontology(const Ontology& o, const std::filesystem::path& path) {
    std::ostringstream ss;
    write_ontology(o, ss);
    text::write_file(path, ss.str());
}

OntologyStats ontology_stats(const Ontology& o) {
    OntologyStats st;
    for (auto p : kAllPos) st.by_pos[p] = 0;
    for (auto k : kAllRelationKinds) st.by_relation[k] = 0;
    for (const auto& [_, s] : o) {
        ++st.by_pos[s.pos];
        ++st.synsets;
        for (const auto& r : s.relations) {
            ++st.by_relation[r.kind];
            ++st.relations;
        }
    }
    return st;
}

} // namespace lexforge
