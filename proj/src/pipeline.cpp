#include "lexforge/pipeline.hpp"

#include "lexforge/annotation.hpp"
#include "lexforge/classify.hpp"
#include "lexforge/docpipe.hpp"
#include "lexforge/evaluate.hpp"
#include "lexforge/expansion.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/log.hpp"
#include "lexforge/ontology.hpp"
#include "lexforge/seedgraph.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <functional>

namespace lexforge {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kDatasetNames{"Data-1", "Data-2", "Data-3", "Data-4", "Data-5", "Data-6"};
const std::vector<ModelKind> kModelKinds{ModelKind::knn, ModelKind::centroid};

struct Stage {
    std::string name;
    std::vector<fs::path> inputs;
    std::string params;
    std::vector<fs::path> outputs;
    std::function<void()> run;
};

// Manifest keys must not depend on the working directory.
std::string path_key(const fs::path& p) { return fs::weakly_canonical(fs::absolute(p)).generic_string(); }

ordered_json checksums(const std::vector<fs::path>& paths) {
    auto j = ordered_json::object();
    for (const auto& p : paths) j[path_key(p)] = fs::exists(p) ? text::file_checksum(p) : std::string("missing");
    return j;
}

/// True when the manifest records identical inputs, params and outputs.
bool up_to_date(const Stage& stage, const fs::path& manifest, std::uint64_t rng_seed) {
    if (!fs::exists(manifest)) return false;
    auto j = ordered_json::parse(text::read_file(manifest), nullptr, false);
    if (j.is_discarded() || !j.is_object()) return false;
    if (j.value("params", std::string{}) != stage.params) return false;
    if (j.value("rng_seed", std::uint64_t{0}) != rng_seed) return false;
    for (const auto& p : stage.outputs)
        if (!fs::exists(p)) return false;
    return j.value("inputs", ordered_json{}) == checksums(stage.inputs) &&
           j.value("outputs", ordered_json{}) == checksums(stage.outputs);
}

void write_manifest(const Stage& stage, const fs::path& manifest, std::uint64_t rng_seed) {
    ordered_json j;
    j["stage"] = stage.name;
    j["params"] = stage.params;
    j["rng_seed"] = rng_seed;
    j["inputs"] = checksums(stage.inputs);
    j["outputs"] = checksums(stage.outputs);
    text::write_file(manifest, j.dump(2) + "\n");
}

std::string join_paths(const std::vector<fs::path>& paths) {
    std::vector<std::string> s;
    for (const auto& p : paths) s.push_back(path_key(p));
    return text::join(s, ",");
}

ordered_json agreement_json(const AnnotationSet& set) {
    ordered_json j;
    j["annotators"] = set.annotators;
    j["items"] = set.items.size();
    j["disagreements"] = disagreements(set);
    j["percent_agreement"] = percent_agreement(set);
    if (set.labels.size() >= 2) {
        auto kappa = fleiss_kappa(set);
        j["fleiss_kappa"] = kappa;
        j["fleiss_kappa_percent"] = 100.0 * kappa;
    }
    return j;
}

/// Imports sheets and adjudicates them; a single sheet is taken as final.
GoldStandard merge_sheets(const std::vector<fs::path>& sheets, const std::optional<fs::path>& tiebreak,
                          ordered_json& agreement) {
    auto set = import_annotations(sheets);
    agreement = agreement_json(set);
    std::map<std::string, Label, std::less<>> tb;
    if (tiebreak) tb = read_tiebreak(*tiebreak);
    return adjudicate(set, tb);
}

std::string grid_params(const std::vector<ClassifierParams>& grid) {
    std::vector<std::string> s;
    for (const auto& p : grid) s.push_back(p.describe());
    return text::join(s, ";");
}

DocPipeline doc_pipeline(const PipelineConfig& cfg) {
    return load_doc_pipeline(cfg.stemmer_rules, cfg.tagger_lexicon, cfg.keep_pos);
}

std::optional<std::uint64_t> fold_seed(const PipelineConfig& cfg) {
    if (cfg.shuffle_folds) return cfg.rng_seed;
    return std::nullopt;
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult result;
    const PipelineLayout out{cfg.output_dir};
    const auto mode = cfg.lenient ? LoadMode::lenient : LoadMode::strict;

    for (const auto& [field, path] : std::vector<std::pair<std::string, fs::path>>{
             {"ontology", cfg.ontology}, {"counts.unigrams", cfg.counts_unigrams}, {"counts.bigrams", cfg.counts_bigrams}}) {
        if (!fs::exists(path)) {
            result.status = ExitStatus::config_error;
            result.message = "field '" + field + "': missing path " + path.string();
            return result;
        }
    }

    std::vector<fs::path> optional_inputs;
    if (cfg.stemmer_rules) optional_inputs.push_back(*cfg.stemmer_rules);
    if (cfg.tagger_lexicon) optional_inputs.push_back(*cfg.tagger_lexicon);

    auto execute = [&](const Stage& stage) {
        const auto manifest = out.manifest(stage.name);
        if (up_to_date(stage, manifest, cfg.rng_seed)) {
            log().info("stage {}: up to date", stage.name);
            result.stages.push_back({stage.name, true});
            return;
        }
        log().info("stage {}: running", stage.name);
        stage.run();
        write_manifest(stage, manifest, cfg.rng_seed);
        result.stages.push_back({stage.name, false});
    };

    std::string current;
    try {
        std::string relations;
        for (auto k : cfg.graph_relations) relations += std::string(to_string(k)) + ",";

        current = "graph";
        execute({"graph", {cfg.ontology},
                 "relations=" + relations + " symmetrize=" + std::to_string(cfg.symmetrize) +
                     " lenient=" + std::to_string(cfg.lenient),
                 {out.graph()}, [&] {
                     auto o = load_ontology(cfg.ontology, mode);
                     text::write_file(out.graph(), graph_to_json(build_graph(o, cfg.graph_relations, cfg.symmetrize)));
                 }});

        current = "scc";
        execute({"scc", {out.graph()}, "kosaraju", {out.partition()}, [&] {
                     auto g = graph_from_json(text::read_file(out.graph()));
                     text::write_file(out.partition(), partition_to_json(kosaraju_scc(g)));
                 }});

        current = "seeds";
        execute({"seeds", {cfg.ontology, out.graph(), out.partition()},
                 "min_size=" + std::to_string(cfg.min_seed_size) + " random=" + std::to_string(cfg.random_seeds),
                 {out.seeds(), out.seed_sheet()}, [&] {
                     auto o = load_ontology(cfg.ontology, mode);
                     auto g = graph_from_json(text::read_file(out.graph()));
                     auto p = partition_from_json(text::read_file(out.partition()));
                     auto seeds = cfg.random_seeds ? select_seeds_random(p, cfg.min_seed_size, cfg.rng_seed)
                                                   : select_seeds(p, cfg.min_seed_size);
                     auto coverage = check_seed_coverage(g, seeds, cfg.min_seed_size);
                     if (!coverage.ok())
                         throw Error("seed list leaves strongly connected nodes unreached: " +
                                     text::join(coverage.violations, ", "));
                     write_seed_list(seeds, out.seeds());
                     export_sheet(seeds, o, out.seed_sheet());
                 }});

        // Human-in-the-loop pause
        std::vector<std::string> pending;
        auto want = [&](const fs::path& p) {
            if (!fs::exists(p)) pending.push_back(p.string());
        };
        if (cfg.seed_sheets.empty()) pending.push_back("[annotation] seed_sheets (not configured)");
        if (cfg.gold_sheets.empty()) pending.push_back("[annotation] gold_sheets (not configured)");
        for (const auto& p : cfg.seed_sheets) want(p);
        for (const auto& p : cfg.gold_sheets) want(p);
        if (cfg.seed_tiebreak) want(*cfg.seed_tiebreak);
        if (cfg.gold_tiebreak) want(*cfg.gold_tiebreak);
        if (!pending.empty()) {
            result.status = ExitStatus::awaiting_annotation;
            result.message = "awaiting annotation: label the rows of " + out.seed_sheet().string() +
                             " (one copy per annotator), label a held-out test sheet, list them under [annotation] "
                             "in the config, then rerun. Missing: " +
                             text::join(pending, ", ");
            return result;
        }

        current = "annotate";
        std::vector<fs::path> annotation_inputs = cfg.seed_sheets;
        annotation_inputs.insert(annotation_inputs.end(), cfg.gold_sheets.begin(), cfg.gold_sheets.end());
        if (cfg.seed_tiebreak) annotation_inputs.push_back(*cfg.seed_tiebreak);
        if (cfg.gold_tiebreak) annotation_inputs.push_back(*cfg.gold_tiebreak);
        annotation_inputs.push_back(out.seeds());
        execute({"annotate", annotation_inputs,
                 "seed=" + join_paths(cfg.seed_sheets) + " gold=" + join_paths(cfg.gold_sheets),
                 {out.seed_gold(), out.test_gold(), out.agreement()}, [&] {
                     auto seeds = read_seed_list(out.seeds());
                     ordered_json seed_agreement, gold_agreement;
                     auto seed_gold = merge_sheets(cfg.seed_sheets, cfg.seed_tiebreak, seed_agreement);
                     std::set<std::string, std::less<>> expected(seeds.begin(), seeds.end()), got;
                     for (const auto& [id, _] : seed_gold) got.insert(id);
                     if (expected != got)
                         throw Error("seed sheets do not label exactly the selected seed list " + out.seeds().string());
                     auto test_gold = merge_sheets(cfg.gold_sheets, cfg.gold_tiebreak, gold_agreement);
                     auto o = load_ontology(cfg.ontology, mode);
                     for (const auto& [id, _] : test_gold)
                         if (!o.contains(id)) throw Error("gold id " + id + " is not in the ontology");
                     write_gold(seed_gold, out.seed_gold());
                     write_gold(test_gold, out.test_gold());
                     ordered_json j{{"seed", seed_agreement}, {"gold", gold_agreement}};
                     text::write_file(out.agreement(), j.dump(2) + "\n");
                 }});

        current = "expand";
        std::vector<fs::path> dataset_paths;
        for (const auto& n : kDatasetNames) dataset_paths.push_back(out.dataset(n));
        execute({"expand", {cfg.ontology, out.seed_gold(), cfg.counts_unigrams, cfg.counts_bigrams},
                 cfg.expansion.describe(), dataset_paths, [&] {
                     auto o = load_ontology(cfg.ontology, mode);
                     auto counts = load_counts(cfg.counts_unigrams, cfg.counts_bigrams);
                     auto seed = seed_from_gold(read_gold(out.seed_gold()));
                     for (const auto& d : generate_training_matrix(o, seed, &counts, cfg.expansion))
                         write_dataset(d, out.dataset(d.name));
                 }});

        current = "docs";
        std::vector<fs::path> doc_inputs{cfg.ontology};
        doc_inputs.insert(doc_inputs.end(), optional_inputs.begin(), optional_inputs.end());
        std::vector<std::string> keep(cfg.keep_pos.begin(), cfg.keep_pos.end());
        execute({"docs", doc_inputs, "keep_pos=" + text::join(keep, ","), {out.documents(), out.vectors()}, [&] {
                     auto o = load_ontology(cfg.ontology, mode);
                     auto docs = doc_pipeline(cfg).build(o);
                     write_documents(docs, out.documents());
                     auto vocab = build_vocabulary(docs);
                     std::vector<FeatureVector> vectors;
                     for (const auto& d : docs) vectors.push_back(vectorize(d.tokens, vocab, d.id));
                     text::write_file(out.vectors(), format_vectors(vectors));
                 }});

        current = "train";
        std::vector<fs::path> train_inputs = dataset_paths;
        train_inputs.push_back(out.documents());
        train_inputs.push_back(out.test_gold());
        std::vector<fs::path> model_paths;
        for (const auto& n : kDatasetNames)
            for (auto k : kModelKinds) model_paths.push_back(out.model(n, std::string(to_string(k))));
        execute({"train", train_inputs,
                 "knn=" + grid_params(cfg.knn_grid) + " centroid=" + grid_params(cfg.centroid_grid) +
                     " folds=" + std::to_string(cfg.folds) + " score=" + std::string(to_string(cfg.score)) +
                     " shuffle=" + std::to_string(cfg.shuffle_folds),
                 model_paths, [&] {
                     auto docs = read_documents(out.documents());
                     auto vocab = build_vocabulary(docs);
                     auto gold = read_gold(out.test_gold());
                     for (const auto& name : kDatasetNames) {
                         auto dataset = read_dataset(out.dataset(name));
                         std::map<std::string, Label, std::less<>> labels;
                         for (const auto& [id, e] : dataset.labels)
                             if (!gold.contains(id)) labels.emplace(id, e.label);
                         auto data = labeled_vectors(labels, docs, vocab);
                         for (auto kind : kModelKinds) {
                             const auto& grid = kind == ModelKind::knn ? cfg.knn_grid : cfg.centroid_grid;
                             TuningResult tuning;
                             try {
                                 tuning = cross_validate(data, grid, cfg.folds, cfg.score, fold_seed(cfg));
                             } catch (const Error& e) {
                                 throw Error(name + " / " + std::string(to_string(kind)) + ": " + e.what());
                             }
                             Model model(tuning.best, vocab, data);
                             double best_score = 0.0;
                             for (const auto& [p, s] : tuning.scores)
                                 if (p == tuning.best) best_score = s;
                             char buf[32];
                             std::snprintf(buf, sizeof buf, "%.6f", best_score);
                             model.metadata() = {{"dataset", name},
                                                 {"case", std::to_string(dataset.expansion_case)},
                                                 {"algorithm", std::string(to_string(dataset.config.algorithm))},
                                                 {"training_items", std::to_string(data.size())},
                                                 {"excluded_gold_items", std::to_string(dataset.labels.size() - data.size())},
                                                 {"cv_folds", std::to_string(cfg.folds)},
                                                 {"cv_score", std::string(to_string(cfg.score)) + "=" + buf}};
                             save_model(model, out.model(name, std::string(to_string(kind))));
                         }
                     }
                 }});

        current = "evaluate";
        std::vector<fs::path> report_paths;
        for (const auto& n : kDatasetNames)
            for (auto k : kModelKinds) report_paths.push_back(out.report(n, std::string(to_string(k))));
        auto eval_outputs = report_paths;
        eval_outputs.push_back(out.summary());
        auto eval_inputs = model_paths;
        eval_inputs.push_back(out.documents());
        eval_inputs.push_back(out.test_gold());
        execute({"evaluate", eval_inputs, "gold", eval_outputs, [&] {
                     auto docs = read_documents(out.documents());
                     std::map<std::string_view, const GlossDocument*> by_id;
                     for (const auto& d : docs) by_id.emplace(d.id, &d);
                     auto gold = read_gold(out.test_gold());
                     RunMatrix matrix;
                     for (const auto& name : kDatasetNames) {
                         for (auto kind : kModelKinds) {
                             auto kind_name = std::string(to_string(kind));
                             auto model = load_model(out.model(name, kind_name));
                             check_vocabulary(model, build_vocabulary(docs));
                             Predictions pred;
                             for (const auto& [id, _] : gold) {
                                 auto it = by_id.find(id);
                                 if (it == by_id.end()) throw Error("no document for gold id " + id);
                                 pred.emplace(id, model.predict_tokens(it->second->tokens));
                             }
                             RunEntry entry{name, kind_name, std::stoi(model.metadata().at("case")),
                                            parse_algorithm(model.metadata().at("algorithm")).value(),
                                            evaluate(pred, gold)};
                             text::write_file(out.report(name, kind_name), report_to_json(entry));
                             matrix.push_back(std::move(entry));
                         }
                     }
                     std::string summary = format_matrix(matrix) + "\n" +
                                           format_aggregate(aggregate_by(matrix, Grouping::algorithm), "algorithm") +
                                           "\n" + format_aggregate(aggregate_by(matrix, Grouping::expansion_case), "case") +
                                           "\n" +
                                           format_aggregate(aggregate_by(matrix, Grouping::classifier), "classifier");
                     text::write_file(out.summary(), summary);
                 }});

        current = "lexicon";
        const auto lex_kind = std::string(to_string(cfg.lexicon_classifier));
        auto lex_meta = out.lexicon();
        lex_meta += ".meta.json";
        execute({"lexicon",
                 {cfg.ontology, out.documents(), out.dataset(cfg.lexicon_dataset), out.test_gold(),
                  out.model(cfg.lexicon_dataset, lex_kind)},
                 "dataset=" + cfg.lexicon_dataset + " classifier=" + lex_kind,
                 {out.lexicon(), lex_meta, out.lexicon_model()}, [&] {
                     auto o = load_ontology(cfg.ontology, mode);
                     auto docs = read_documents(out.documents());
                     auto vocab = build_vocabulary(docs);
                     auto dataset = read_dataset(out.dataset(cfg.lexicon_dataset));
                     auto gold = read_gold(out.test_gold());
                     auto tuned = load_model(out.model(cfg.lexicon_dataset, lex_kind));
                     auto data = labeled_vectors(combined_labels(dataset.labels, gold), docs, vocab);
                     Model model(tuned.params(), vocab, data);
                     model.metadata() = {{"dataset", cfg.lexicon_dataset + "+gold"},
                                         {"parameters", "tuned on " + cfg.lexicon_dataset +
                                                            " without gold items; reused after concatenating gold"},
                                         {"training_items", std::to_string(data.size())}};
                     save_model(model, out.lexicon_model());
                     auto lex = build_lexicon(o, dataset.labels, gold, model, docs);
                     export_lexicon(lex, out.lexicon());
                 }});
    } catch (const std::exception& e) {
        result.status = ExitStatus::stage_failure;
        result.message = "stage " + current + " failed: " + e.what();
        log().error("{}", result.message);
        return result;
    }

    result.message = "pipeline complete: " + out.lexicon().string();
    return result;
}

PipelineResult run_pipeline(const fs::path& config_path) {
    try {
        return run_pipeline(PipelineConfig::from_file(config_path));
    } catch (const Error& e) {
        PipelineResult r;
        r.status = ExitStatus::config_error;
        r.message = e.what();
        return r;
    }
}

} // namespace lexforge
