#include "lexforge/evaluate.hpp"

#include "lexforge/error.hpp"
#include "lexforge/log.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace lexforge {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kInterpretation =
    "F-measure is the macro-averaged F1 over positive, neutral and negative (interpretation)";

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

EvalReport score_labels(const std::vector<Label>& gold, const std::vector<Label>& predicted) {
    if (gold.size() != predicted.size()) throw Error("gold and predicted label sequences differ in length");
    EvalReport r;
    r.count = gold.size();
    for (std::size_t i = 0; i < gold.size(); ++i) ++r.confusion[label_index(gold[i])][label_index(predicted[i])];

    std::size_t trace = 0;
    for (std::size_t c = 0; c < 3; ++c) trace += r.confusion[c][c];
    if (r.count == 0) r.warnings.emplace_back("no items to score; accuracy set to 0");
    r.accuracy = ratio(trace, r.count);

    double f_sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::size_t gold_total = 0, pred_total = 0;
        for (std::size_t o = 0; o < 3; ++o) {
            gold_total += r.confusion[c][o];
            pred_total += r.confusion[o][c];
        }
        auto name = std::string(to_string(kLabelOrder[c]));
        if (gold_total == 0 && pred_total == 0)
            r.warnings.push_back(name + " absent from gold and predictions; F1 counted as 0");
        else if (pred_total == 0)
            r.warnings.push_back(name + " never predicted; precision set to 0");
        else if (gold_total == 0)
            r.warnings.push_back(name + " absent from gold; recall set to 0");

        auto& s = r.per_category[c];
        s.precision = ratio(r.confusion[c][c], pred_total);
        s.recall = ratio(r.confusion[c][c], gold_total);
        s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
        f_sum += s.f1;
    }
    r.macro_f = f_sum / 3.0;
    return r;
}

EvalReport evaluate(const Predictions& predictions, const GoldStandard& gold) {
    std::vector<Label> g, p;
    std::vector<std::string> missing;
    for (const auto& [id, entry] : gold) {
        auto it = predictions.find(id);
        if (it == predictions.end()) {
            missing.push_back(id);
            continue;
        }
        g.push_back(entry.label);
        p.push_back(it->second);
    }
    if (!missing.empty()) throw Error("no prediction for gold ids: " + text::join(missing, ", "));
    auto report = score_labels(g, p);
    for (const auto& w : report.warnings) log().warn("{}", w);
    return report;
}

std::optional<ScoreKind> parse_score_kind(std::string_view s) noexcept {
    if (s == "accuracy") return ScoreKind::accuracy;
    if (s == "macro-f") return ScoreKind::macro_f;
    return std::nullopt;
}

std::string_view to_string(ScoreKind s) noexcept { return s == ScoreKind::accuracy ? "accuracy" : "macro-f"; }

double score_value(const EvalReport& report, ScoreKind kind) noexcept {
    return kind == ScoreKind::accuracy ? report.accuracy : report.macro_f;
}

std::optional<Grouping> parse_grouping(std::string_view s) noexcept {
    if (s == "algorithm") return Grouping::algorithm;
    if (s == "case") return Grouping::expansion_case;
    if (s == "classifier") return Grouping::classifier;
    return std::nullopt;
}

std::map<std::string, double> aggregate_by(const RunMatrix& matrix, Grouping grouping) {
    if (matrix.empty()) throw Error("cannot aggregate an empty run matrix");
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (const auto& e : matrix) {
        std::string key;
        switch (grouping) {
        case Grouping::algorithm: key = std::string(to_string(e.algorithm)); break;
        case Grouping::expansion_case: key = std::to_string(e.expansion_case); break;
        case Grouping::classifier: key = e.classifier; break;
        }
        acc[key].first += e.report.macro_f;
        ++acc[key].second;
    }
    std::map<std::string, double> out;
    for (const auto& [k, v] : acc) out[k] = v.first / static_cast<double>(v.second);
    return out;
}

std::string report_to_json(const RunEntry& e) {
    ordered_json j;
    j["note"] = kInterpretation;
    j["dataset"] = e.dataset;
    j["classifier"] = e.classifier;
    j["case"] = e.expansion_case;
    j["algorithm"] = to_string(e.algorithm);
    j["count"] = e.report.count;
    j["accuracy"] = e.report.accuracy;
    j["macro_f"] = e.report.macro_f;
    auto per = ordered_json::object();
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& s = e.report.per_category[c];
        per[std::string(to_string(kLabelOrder[c]))] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    }
    j["per_category"] = std::move(per);
    j["confusion"] = e.report.confusion;
    j["warnings"] = e.report.warnings;
    return j.dump(2) + "\n";
}

RunEntry report_from_json(std::string_view json) {
    try {
        auto j = ordered_json::parse(json);
        RunEntry e;
        e.dataset = j.value("dataset", std::string{});
        e.classifier = j.value("classifier", std::string{});
        e.expansion_case = j.value("case", 0);
        e.algorithm = parse_algorithm(j.value("algorithm", std::string("default"))).value_or(Algorithm::default_rules);
        e.report.count = j.at("count").get<std::size_t>();
        e.report.accuracy = j.at("accuracy").get<double>();
        e.report.macro_f = j.at("macro_f").get<double>();
        for (std::size_t c = 0; c < 3; ++c) {
            const auto& s = j.at("per_category").at(std::string(to_string(kLabelOrder[c])));
            e.report.per_category[c] = {s.at("precision").get<double>(), s.at("recall").get<double>(),
                                        s.at("f1").get<double>()};
        }
        e.report.confusion = j.at("confusion").get<ConfusionMatrix>();
        e.report.warnings = j.value("warnings", std::vector<std::string>{});
        return e;
    } catch (const ordered_json::exception& ex) {
        throw Error(std::string("malformed report: ") + ex.what());
    }
}

RunMatrix load_run_matrix(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    RunMatrix m;
    for (const auto& f : files) {
        auto j = ordered_json::parse(text::read_file(f), nullptr, false);
        // skip summaries and other non-report json in the directory
        if (j.is_discarded() || !j.is_object() || !j.contains("confusion")) continue;
        m.push_back(report_from_json(text::read_file(f)));
    }
    return m;
}

std::string format_report(const RunEntry& e) {
    std::string out;
    char buf[160];
    out += "# " + std::string(kInterpretation) + "\n";
    if (!e.dataset.empty()) out += "dataset " + e.dataset + "  classifier " + e.classifier + "\n";
    std::snprintf(buf, sizeof buf, "items %zu  accuracy %.5f  macro-F %.5f\n", e.report.count, e.report.accuracy,
                  e.report.macro_f);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-10s %10s %10s %10s\n", "category", "precision", "recall", "f1");
    out += buf;
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& s = e.report.per_category[c];
        std::snprintf(buf, sizeof buf, "%-10s %10.5f %10.5f %10.5f\n", std::string(to_string(kLabelOrder[c])).c_str(),
                      s.precision, s.recall, s.f1);
        out += buf;
    }
    out += "confusion (rows gold, cols predicted: negative neutral positive)\n";
    for (std::size_t g = 0; g < 3; ++g) {
        std::snprintf(buf, sizeof buf, "%-10s %8zu %8zu %8zu\n", std::string(to_string(kLabelOrder[g])).c_str(),
                      e.report.confusion[g][0], e.report.confusion[g][1], e.report.confusion[g][2]);
        out += buf;
    }
    return out;
}

std::string format_matrix(const RunMatrix& matrix) {
    std::map<std::string, std::map<std::string, const EvalReport*>> rows;
    std::vector<std::string> classifiers;
    for (const auto& e : matrix) {
        rows[e.dataset][e.classifier] = &e.report;
        if (std::find(classifiers.begin(), classifiers.end(), e.classifier) == classifiers.end())
            classifiers.push_back(e.classifier);
    }
    std::sort(classifiers.begin(), classifiers.end(), std::greater<>()); // knn before centroid
    char buf[64];
    std::string out = "training set";
    for (const auto& c : classifiers) {
        std::snprintf(buf, sizeof buf, " | %-8s acc %-8s F", c.c_str(), c.c_str());
        out += buf;
    }
    out += "\n";
    for (const auto& [dataset, cells] : rows) {
        std::snprintf(buf, sizeof buf, "%-12s", dataset.c_str());
        out += buf;
        for (const auto& c : classifiers) {
            auto it = cells.find(c);
            if (it == cells.end()) {
                std::snprintf(buf, sizeof buf, " | %12s %12s", "-", "-");
            } else {
                std::snprintf(buf, sizeof buf, " | %12.5f %12.5f", it->second->accuracy, it->second->macro_f);
            }
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string format_aggregate(const std::map<std::string, double>& groups, std::string_view title) {
    std::string out = std::string(title) + "\tmean macro-F\n";
    char buf[64];
    for (const auto& [k, v] : groups) {
        std::snprintf(buf, sizeof buf, "%.4f", v);
        out += k + "\t" + buf + "\n";
    }
    return out;
}

void write_predictions(const Predictions& predictions, const std::filesystem::path& path) {
    std::string out = "id\tlabel\n";
    for (const auto& [id, l] : predictions) out += id + "\t" + std::string(to_string(l)) + "\n";
    text::write_file(path, out);
}

Predictions read_predictions(const std::filesystem::path& path) {
    Predictions p;
    for (const auto& [id, e] : read_gold(path)) p.emplace(id, e.label);
    return p;
}

} // namespace lexforge
