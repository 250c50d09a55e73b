// Python bindings. Labels cross the boundary as "positive" / "neutral" /
// "negative" strings; sparse vectors as {index: weight} dicts.
#include "lexforge/annotation.hpp"
#include "lexforge/classify.hpp"
#include "lexforge/config.hpp"
#include "lexforge/docpipe.hpp"
#include "lexforge/evaluate.hpp"
#include "lexforge/expansion.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/ontology.hpp"
#include "lexforge/pipeline.hpp"
#include "lexforge/seedgraph.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace lexforge;

namespace {

Label to_label(const std::string& s) {
    auto l = parse_label(s);
    if (!l) throw py::value_error("unknown label '" + s + "'");
    return *l;
}

std::string label_str(Label l) { return std::string(to_string(l)); }

using LabelDict = std::map<std::string, std::string>;

std::map<std::string, Label, std::less<>> to_labels(const LabelDict& d) {
    std::map<std::string, Label, std::less<>> out;
    for (const auto& [id, l] : d) out.emplace(id, to_label(l));
    return out;
}

FeatureVector to_vector(const std::map<std::uint32_t, double>& d) {
    FeatureVector v;
    for (const auto& [i, w] : d) v.entries.emplace_back(i, w);
    return v;
}

std::map<std::uint32_t, double> from_vector(const FeatureVector& v) {
    return {v.entries.begin(), v.entries.end()};
}

Dataset to_dataset(const std::vector<std::map<std::uint32_t, double>>& vectors, const std::vector<std::string>& labels) {
    if (vectors.size() != labels.size()) throw py::value_error("vectors and labels differ in length");
    Dataset data;
    for (std::size_t i = 0; i < vectors.size(); ++i) data.push_back({to_vector(vectors[i]), to_label(labels[i])});
    return data;
}

NGramCounts to_counts(const std::map<std::string, std::uint64_t>& unigrams,
                      const std::map<std::pair<std::string, std::string>, std::uint64_t>& bigrams,
                      std::optional<std::uint64_t> total) {
    NGramCounts c;
    std::uint64_t sum = 0;
    for (const auto& [t, n] : unigrams) {
        c.unigrams.emplace(t, n);
        sum += n;
    }
    c.bigrams = bigrams;
    c.total_tokens = total.value_or(sum);
    return c;
}

LogBase to_base(const std::string& s) {
    if (s == "2") return LogBase::two;
    if (s == "e") return LogBase::natural;
    throw py::value_error("log base must be '2' or 'e'");
}

py::dict report_dict(const EvalReport& r) {
    py::dict d;
    d["accuracy"] = r.accuracy;
    d["macro_f"] = r.macro_f;
    d["count"] = r.count;
    d["confusion"] = r.confusion;
    py::dict per;
    for (auto l : kLabelOrder) {
        const auto& s = r.per_category[label_index(l)];
        per[py::str(label_str(l))] = py::dict(py::arg("precision") = s.precision, py::arg("recall") = s.recall,
                                              py::arg("f1") = s.f1);
    }
    d["per_category"] = per;
    d["warnings"] = r.warnings;
    return d;
}

LabelDict seed_labels(const LabeledSeed& s) {
    LabelDict out;
    for (const auto& [id, e] : s) out.emplace(id, label_str(e.label));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "lexforge core bindings";
    m.attr("__version__") = LEXFORGE_VERSION;

    py::register_exception<Error>(m, "LexforgeError", PyExc_RuntimeError);

    py::class_<Ontology>(m, "Ontology")
        .def_static(
            "load",
            [](const std::filesystem::path& p, bool lenient) {
                return load_ontology(p, lenient ? LoadMode::lenient : LoadMode::strict);
            },
            py::arg("path"), py::arg("lenient") = false)
        .def("__len__", &Ontology::size)
        .def("__contains__", &Ontology::contains)
        .def("ids", &Ontology::ids)
        .def("pos", [](const Ontology& o, const std::string& id) { return std::string(to_string(o.at(id).pos)); })
        .def("gloss", [](const Ontology& o, const std::string& id) { return o.at(id).gloss; })
        .def_property_readonly("warnings", [](const Ontology& o) { return o.metadata().warnings; })
        .def("stats", [](const Ontology& o) {
            auto s = ontology_stats(o);
            std::map<std::string, std::size_t> out{{"synsets", s.synsets}, {"relations", s.relations}};
            for (auto [p, n] : s.by_pos) out["pos." + std::string(to_string(p))] = n;
            for (auto [k, n] : s.by_relation) out["relation." + std::string(to_string(k))] = n;
            return out;
        });

    // seedgraph
    m.def(
        "strongly_connected_components",
        [](std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
            std::vector<Edge> e;
            for (const auto& [a, b] : edges) e.push_back({a, b, RelationKind::antonym});
            return kosaraju_scc(PolarityGraph(std::move(nodes), std::move(e))).components;
        },
        py::arg("nodes"), py::arg("edges"), "Components (sorted members), ordered by smallest member.");
    m.def(
        "polarity_components",
        [](const Ontology& o, const std::vector<std::string>& relations, bool symmetrize) {
            std::set<RelationKind> kinds;
            for (const auto& r : relations) {
                auto k = parse_relation_kind(r);
                if (!k) throw py::value_error("unknown relation kind '" + r + "'");
                kinds.insert(*k);
            }
            return kosaraju_scc(build_graph(o, kinds, symmetrize)).components;
        },
        py::arg("ontology"), py::arg("relations") = std::vector<std::string>{"antonym"}, py::arg("symmetrize") = true);
    m.def(
        "select_seeds",
        [](const std::vector<std::vector<std::string>>& components, std::size_t min_size) {
            return select_seeds(make_partition(components), min_size);
        },
        py::arg("components"), py::arg("min_size") = 2);

    // annotation
    m.def(
        "fleiss_kappa",
        [](const std::vector<LabelDict>& raters) {
            AnnotationSet set;
            for (std::size_t a = 0; a < raters.size(); ++a) {
                set.annotators.push_back("rater" + std::to_string(a));
                set.labels.push_back(to_labels(raters[a]));
            }
            if (!raters.empty())
                for (const auto& [id, _] : raters.front()) set.items.push_back(id);
            return fleiss_kappa(set);
        },
        py::arg("raters"), "One {item: label} dict per rater, all over the same items.");

    // expansion
    m.def(
        "pmi",
        [](const std::string& a, const std::string& b, const std::map<std::string, std::uint64_t>& unigrams,
           const std::map<std::pair<std::string, std::string>, std::uint64_t>& bigrams,
           std::optional<std::uint64_t> total, const std::string& base) {
            return pmi(a, b, to_counts(unigrams, bigrams, total), to_base(base));
        },
        py::arg("a"), py::arg("b"), py::arg("unigrams"), py::arg("bigrams"), py::arg("total") = py::none(),
        py::arg("base") = "2");
    m.def(
        "expand",
        [](const Ontology& o, const LabelDict& seed, int expansion_case, const std::string& algorithm,
           std::optional<std::pair<std::filesystem::path, std::filesystem::path>> counts_files) {
            auto alg = parse_algorithm(algorithm);
            if (!alg) throw py::value_error("algorithm must be 'default' or 'pmi'");
            LabeledSeed s;
            for (const auto& [id, l] : seed) s.emplace(id, SeedEntry{to_label(l), 0, LabelSource::hand});
            std::optional<NGramCounts> counts;
            if (counts_files) counts = load_counts(counts_files->first, counts_files->second);
            return seed_labels(
                expand(o, s, ExpansionConfig::preset(expansion_case, *alg), counts ? &*counts : nullptr));
        },
        py::arg("ontology"), py::arg("seed"), py::arg("case"), py::arg("algorithm") = "default",
        py::arg("counts") = py::none(), "counts: optional (unigram_path, bigram_path).");

    // docpipe
    m.def("tokenize", &tokenize, py::arg("text"));
    py::class_<Vocabulary>(m, "Vocabulary")
        .def(py::init([](const std::vector<std::vector<std::string>>& docs) { return build_vocabulary(docs); }),
             py::arg("documents"))
        .def("__len__", &Vocabulary::size)
        .def_property_readonly("terms", &Vocabulary::terms)
        .def_property_readonly("checksum", &Vocabulary::checksum)
        .def("index", &Vocabulary::index)
        .def("idf", &Vocabulary::idf)
        .def("vectorize", [](const Vocabulary& v, const std::vector<std::string>& tokens) {
            return from_vector(vectorize(tokens, v));
        });

    // classify
    m.def(
        "predict_knn",
        [](const std::vector<std::map<std::uint32_t, double>>& vectors, const std::vector<std::string>& labels,
           const std::map<std::uint32_t, double>& query, std::size_t k, const std::string& metric) {
            auto mt = parse_metric(metric);
            if (!mt) throw py::value_error("unknown metric '" + metric + "'");
            return label_str(predict_knn(train_knn(to_dataset(vectors, labels), k, *mt), to_vector(query)));
        },
        py::arg("vectors"), py::arg("labels"), py::arg("query"), py::arg("k") = 1,
        py::arg("metric") = "cosine-distance");
    m.def(
        "predict_centroid",
        [](const std::vector<std::map<std::uint32_t, double>>& vectors, const std::vector<std::string>& labels,
           const std::map<std::uint32_t, double>& query, const std::string& similarity) {
            auto s = parse_similarity(similarity);
            if (!s) throw py::value_error("unknown similarity '" + similarity + "'");
            return label_str(predict_centroid(train_centroid(to_dataset(vectors, labels), *s), to_vector(query)));
        },
        py::arg("vectors"), py::arg("labels"), py::arg("query"), py::arg("similarity") = "cosine");

    // evaluate
    m.def(
        "score_labels",
        [](const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
            std::vector<Label> g, p;
            for (const auto& s : gold) g.push_back(to_label(s));
            for (const auto& s : predicted) p.push_back(to_label(s));
            return report_dict(score_labels(g, p));
        },
        py::arg("gold"), py::arg("predicted"));

    // lexicon
    m.def(
        "read_lexicon",
        [](const std::filesystem::path& p) {
            std::map<std::string, std::tuple<std::string, std::string, std::string>> out;
            for (const auto& [id, e] : import_lexicon(p).entries)
                out.emplace(id, std::tuple{std::string(to_string(e.pos)), label_str(e.label),
                                           std::string(to_string(e.source))});
            return out;
        },
        py::arg("path"), "{id: (pos, label, source)}");

    // pipeline
    m.def(
        "validate_config",
        [](const std::filesystem::path& p) {
            auto r = validate_config(p);
            return py::dict(py::arg("ok") = r.ok, py::arg("resolved") = r.resolved, py::arg("errors") = r.errors,
                            py::arg("pending") = r.pending);
        },
        py::arg("path"));
    m.def(
        "run_pipeline",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir) {
            PipelineResult r;
            if (output_dir) {
                try {
                    auto cfg = PipelineConfig::from_file(config);
                    cfg.output_dir = *output_dir;
                    py::gil_scoped_release release;
                    r = run_pipeline(cfg);
                } catch (const Error& e) {
                    r.status = ExitStatus::config_error;
                    r.message = e.what();
                }
            } else {
                py::gil_scoped_release release;
                r = run_pipeline(config);
            }
            std::vector<std::pair<std::string, bool>> stages;
            for (const auto& s : r.stages) stages.emplace_back(s.name, s.skipped);
            return py::dict(py::arg("status") = static_cast<int>(r.status), py::arg("message") = r.message,
                            py::arg("stages") = stages);
        },
        py::arg("config"), py::arg("output_dir") = py::none(),
        "Returns {status, message, stages[(name, skipped)]}; status follows the CLI exit codes.");
}
