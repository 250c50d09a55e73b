#include "lexforge/annotation.hpp"

#include "lexforge/error.hpp"
#include "lexforge/log.hpp"
#include "lexforge/text.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace lexforge {

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::agreed ? "agreed" : "adjudicated";
}

namespace {

std::string cell(std::string_view s) {
    std::string out(s);
    std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return text::squeeze_spaces(out);
}

struct Columns {
    std::size_t id = 0;
    std::optional<std::size_t> label;
    std::optional<std::size_t> provenance;
};

Columns header_columns(const std::string& header, const std::string& source) {
    auto names = text::split(header, '\t');
    Columns c;
    bool have_id = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto n = text::trim(names[i]);
        if (n == "id") {
            c.id = i;
            have_id = true;
        } else if (n == "label") {
            c.label = i;
        } else if (n == "provenance") {
            c.provenance = i;
        }
    }
    if (!have_id || !c.label) throw ParseError(source, 1, "header must name 'id' and 'label' columns");
    return c;
}

} // namespace

std::size_t export_sheet(const std::vector<std::string>& seeds, const Ontology& ontology,
                         const std::filesystem::path& path) {
    std::string out = "id\tpos\tsenses\tgloss\tlabel\n";
    for (const auto& id : seeds) {
        const auto* s = ontology.find(id);
        if (!s) throw Error("seed id " + id + " is not in the ontology");
        out += cell(s->id) + "\t" + std::string(to_string(s->pos)) + "\t" + cell(text::join(s->senses, " ")) + "\t" +
               cell(s->gloss) + "\t\n";
    }
    text::write_file(path, out);
    return seeds.size();
}

std::vector<SheetRow> read_sheet(const std::filesystem::path& path, bool allow_blank) {
    const auto source = path.string();
    auto rows = text::lines(text::read_file(path));
    if (rows.empty()) throw ParseError(source, 1, "missing header");
    auto cols = header_columns(rows.front(), source);

    std::vector<SheetRow> out;
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) continue;
        auto fields = text::split(rows[i], '\t');
        std::string id(text::trim(cols.id < fields.size() ? fields[cols.id] : ""));
        if (id.empty()) throw ParseError(source, i + 1, "row has no id");
        if (!seen.insert(id).second) throw ParseError(source, i + 1, "duplicate id " + id);
        std::string raw(text::trim(*cols.label < fields.size() ? fields[*cols.label] : ""));
        SheetRow row{id, std::nullopt};
        if (raw.empty()) {
            if (!allow_blank) throw ParseError(source, i + 1, "missing label for " + id);
        } else {
            row.label = parse_label(raw);
            if (!row.label)
                throw ParseError(source, i + 1,
                                 "label '" + raw + "' is not one of positive|neutral|negative");
        }
        out.push_back(std::move(row));
    }
    return out;
}

AnnotationSet import_annotations(const std::vector<std::filesystem::path>& paths) {
    AnnotationSet set;
    std::set<std::string, std::less<>> universe;
    for (std::size_t a = 0; a < paths.size(); ++a) {
        auto rows = read_sheet(paths[a]);
        std::map<std::string, Label, std::less<>> labels;
        std::set<std::string, std::less<>> ids;
        for (const auto& r : rows) {
            labels.emplace(r.id, *r.label);
            ids.insert(r.id);
        }
        if (a == 0) {
            for (const auto& r : rows) set.items.push_back(r.id);
            universe = ids;
        } else if (ids != universe) {
            std::vector<std::string> diff;
            std::set_symmetric_difference(ids.begin(), ids.end(), universe.begin(), universe.end(),
                                          std::back_inserter(diff));
            throw Error("item universe of " + paths[a].string() + " differs from " + paths[0].string() + " on " +
                        text::join(diff, ", "));
        }
        set.annotators.push_back(paths[a].stem().string());
        set.labels.push_back(std::move(labels));
    }
    return set;
}

namespace {

/// counts[i][j]: raters assigning category j to item i.
std::vector<std::array<std::size_t, 3>> category_counts(const AnnotationSet& annotations) {
    std::vector<std::array<std::size_t, 3>> counts(annotations.items.size(), {0, 0, 0});
    for (std::size_t i = 0; i < annotations.items.size(); ++i) {
        for (const auto& rater : annotations.labels) {
            auto it = rater.find(annotations.items[i]);
            if (it == rater.end()) throw Error("annotator is missing a label for " + annotations.items[i]);
            ++counts[i][label_index(it->second)];
        }
    }
    return counts;
}

bool unanimous(const std::array<std::size_t, 3>& c) {
    return std::count_if(c.begin(), c.end(), [](std::size_t v) { return v > 0; }) <= 1;
}

} // namespace

double fleiss_kappa(const AnnotationSet& annotations) {
    const auto raters = annotations.labels.size();
    if (raters < 2) throw Error("Fleiss' kappa needs at least 2 annotators");
    if (annotations.items.empty()) throw Error("Fleiss' kappa needs at least 1 item");

    auto counts = category_counts(annotations);
    if (std::all_of(counts.begin(), counts.end(), unanimous)) return 1.0;

    const double n = static_cast<double>(raters);
    const double items = static_cast<double>(counts.size());
    double mean_agreement = 0.0;
    std::array<double, 3> totals{0, 0, 0};
    for (const auto& row : counts) {
        double sq = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            sq += static_cast<double>(row[j] * row[j]);
            totals[j] += static_cast<double>(row[j]);
        }
        mean_agreement += (sq - n) / (n * (n - 1.0));
    }
    mean_agreement /= items;

    double expected = 0.0;
    for (double t : totals) {
        double p = t / (items * n);
        expected += p * p;
    }
    return (mean_agreement - expected) / (1.0 - expected);
}

double percent_agreement(const AnnotationSet& annotations) {
    if (annotations.items.empty()) return 1.0;
    auto counts = category_counts(annotations);
    auto agreed = std::count_if(counts.begin(), counts.end(), unanimous);
    return static_cast<double>(agreed) / static_cast<double>(counts.size());
}

std::vector<std::string> disagreements(const AnnotationSet& annotations) {
    auto counts = category_counts(annotations);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (!unanimous(counts[i])) out.push_back(annotations.items[i]);
    return out;
}

GoldStandard adjudicate(const AnnotationSet& annotations, const std::map<std::string, Label, std::less<>>& tiebreaker,
                        std::vector<std::string>* warnings) {
    if (annotations.labels.empty()) throw Error("adjudication needs at least one annotator");
    auto disputed = disagreements(annotations);
    std::set<std::string, std::less<>> disputed_set(disputed.begin(), disputed.end());

    std::vector<std::string> uncovered;
    for (const auto& id : disputed)
        if (!tiebreaker.contains(id)) uncovered.push_back(id);
    if (!uncovered.empty()) throw Error("tiebreaker does not cover disagreed items: " + text::join(uncovered, ", "));

    GoldStandard gold;
    for (const auto& id : annotations.items) {
        if (disputed_set.contains(id)) {
            gold[id] = {tiebreaker.find(id)->second, Provenance::adjudicated};
        } else {
            gold[id] = {annotations.labels.front().find(id)->second, Provenance::agreed};
        }
    }
    for (const auto& [id, _] : tiebreaker) {
        if (disputed_set.contains(id)) continue;
        auto msg = "tiebreaker label for " + id + " ignored (item is not disputed)";
        log().warn("{}", msg);
        if (warnings) warnings->push_back(msg);
    }
    return gold;
}

std::map<std::string, Label, std::less<>> read_tiebreak(const std::filesystem::path& path) {
    std::map<std::string, Label, std::less<>> out;
    for (const auto& row : read_sheet(path, true))
        if (row.label) out.emplace(row.id, *row.label);
    return out;
}

std::string format_gold(const GoldStandard& gold) {
    std::string out = "id\tlabel\tprovenance\n";
    for (const auto& [id, e] : gold)
        out += id + "\t" + std::string(to_string(e.label)) + "\t" + std::string(to_string(e.provenance)) + "\n";
    return out;
}

void write_gold(const GoldStandard& gold, const std::filesystem::path& path) {
    text::write_file(path, format_gold(gold));
}

GoldStandard read_gold(const std::filesystem::path& path) {
    const auto source = path.string();
    auto rows = text::lines(text::read_file(path));
    if (rows.empty()) throw ParseError(source, 1, "missing header");
    auto cols = header_columns(rows.front(), source);
    GoldStandard gold;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) continue;
        auto fields = text::split(rows[i], '\t');
        auto get = [&](std::size_t c) { return std::string(text::trim(c < fields.size() ? fields[c] : "")); };
        auto id = get(cols.id);
        auto label = parse_label(get(*cols.label));
        if (id.empty() || !label) throw ParseError(source, i + 1, "row needs an id and a valid label");
        auto prov = Provenance::agreed;
        if (cols.provenance && get(*cols.provenance) == "adjudicated") prov = Provenance::adjudicated;
        if (!gold.emplace(id, GoldEntry{*label, prov}).second) throw ParseError(source, i + 1, "duplicate id " + id);
    }
    return gold;
}

} // namespace lexforge
