// lexforge command-line entry point. Argument handling only; all work is
// delegated to the library.
#include "lexforge/annotation.hpp"
#include "lexforge/classify.hpp"
#include "lexforge/config.hpp"
#include "lexforge/docpipe.hpp"
#include "lexforge/evaluate.hpp"
#include "lexforge/expansion.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/log.hpp"
#include "lexforge/ontology.hpp"
#include "lexforge/pipeline.hpp"
#include "lexforge/seedgraph.hpp"
#include "lexforge/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

using namespace lexforge;
namespace fs = std::filesystem;

namespace {

constexpr int kCheckFailed = 1;

template <class T>
T require(std::optional<T> v, const std::string& what, const std::string& value) {
    if (!v) throw CLI::ValidationError(what, "unknown value '" + value + "'");
    return *v;
}

std::set<RelationKind> parse_relations(const std::string& spec) {
    std::set<RelationKind> kinds;
    for (const auto& part : text::split(spec, ',')) {
        auto name = text::trim(part);
        if (name.empty()) continue;
        kinds.insert(require(parse_relation_kind(name), "--relations", std::string(name)));
    }
    return kinds;
}

std::set<std::string, std::less<>> parse_keep_pos(const std::string& spec) {
    std::set<std::string, std::less<>> keep;
    for (const auto& part : text::split(spec, ','))
        if (auto t = text::trim(part); !t.empty()) keep.emplace(t);
    return keep;
}

std::optional<fs::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

void print_agreement(const AnnotationSet& set) {
    auto kappa = fleiss_kappa(set);
    std::printf("annotators\t%zu\n", set.annotators.size());
    std::printf("items\t%zu\n", set.items.size());
    std::printf("fleiss_kappa\t%.6f\n", kappa);
    std::printf("fleiss_kappa_percent\t%.2f\n", 100.0 * kappa);
    std::printf("percent_agreement\t%.2f\n", 100.0 * percent_agreement(set));
    std::printf("disagreements\t%zu\n", disagreements(set).size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexforge: three-way sentiment lexicon induction over a wordnet-style ontology"};
    app.set_version_flag("--version", std::string("lexforge ") + LEXFORGE_VERSION);
    app.require_subcommand(1);

    std::function<int()> action;
    auto bind = [&](CLI::App* cmd, std::function<int()> fn) {
        // nested subcommands run their callbacks before the parent
        cmd->callback([&action, fn] {
            if (!action) action = fn;
        });
    };

    // ontology
    auto* ontology = app.add_subcommand("ontology", "Inspect ontology files")->require_subcommand(1);
    std::string onto_path;
    bool lenient = false;
    {
        auto* validate = ontology->add_subcommand("validate", "Parse and check an ontology file");
        validate->add_option("path", onto_path)->required()->check(CLI::ExistingFile);
        validate->add_flag("--lenient", lenient, "Drop dangling relations and unknown kinds with a warning");
        bind(validate, [&] {
            auto o = load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict);
            for (const auto& w : o.metadata().warnings) std::printf("warning\t%s\n", w.c_str());
            std::printf("ok\t%zu synsets\n", o.size());
            return 0;
        });
        auto* stats = ontology->add_subcommand("stats", "Count synsets and relations");
        stats->add_option("path", onto_path)->required()->check(CLI::ExistingFile);
        stats->add_flag("--lenient", lenient);
        bind(stats, [&] {
            auto s = ontology_stats(load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict));
            std::printf("synsets\t%zu\n", s.synsets);
            for (auto [p, n] : s.by_pos) std::printf("pos.%s\t%zu\n", std::string(to_string(p)).c_str(), n);
            std::printf("relations\t%zu\n", s.relations);
            for (auto [k, n] : s.by_relation)
                std::printf("relation.%s\t%zu\n", std::string(to_string(k)).c_str(), n);
            return 0;
        });
    }

    // graph
    auto* graph = app.add_subcommand("graph", "Polarity graph and strongly connected components")->require_subcommand(1);
    std::string relations = "antonym", out_path, graph_path;
    bool no_symmetrize = false;
    {
        auto* build = graph->add_subcommand("build", "Build the polarity graph");
        build->add_option("ontology", onto_path)->required()->check(CLI::ExistingFile);
        build->add_option("--relations", relations, "Comma-separated relation kinds")->capture_default_str();
        build->add_flag("--no-symmetrize", no_symmetrize, "Keep edges one-directional");
        build->add_flag("--lenient", lenient);
        build->add_option("-o,--output", out_path)->required();
        bind(build, [&] {
            auto o = load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict);
            auto g = build_graph(o, parse_relations(relations), !no_symmetrize);
            text::write_file(out_path, graph_to_json(g));
            log().info("graph: {} nodes, {} edges", g.size(), g.edges().size());
            return 0;
        });
        auto* scc = graph->add_subcommand("scc", "Partition a graph into strongly connected components");
        scc->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
        scc->add_option("-o,--output", out_path)->required();
        bind(scc, [&] {
            auto p = kosaraju_scc(graph_from_json(text::read_file(graph_path)));
            text::write_file(out_path, partition_to_json(p));
            for (auto [b, n] : scc_histogram(p)) std::printf("%s\t%zu\n", std::string(to_string(b)).c_str(), n);
            return 0;
        });
    }

    // seeds
    auto* seeds = app.add_subcommand("seeds", "Seed selection")->require_subcommand(1);
    std::string partition_path, seeds_path;
    std::size_t min_size = 2;
    bool random = false;
    std::uint64_t rng_seed = 0;
    {
        auto* select = seeds->add_subcommand("select", "One seed per component of at least --min-size nodes");
        select->add_option("partition", partition_path)->required()->check(CLI::ExistingFile);
        select->add_option("--min-size", min_size)->capture_default_str()->check(CLI::PositiveNumber);
        select->add_flag("--random", random, "Pick a random member instead of the smallest id");
        select->add_option("--rng-seed", rng_seed)->capture_default_str();
        select->add_option("-o,--output", out_path)->required();
        bind(select, [&] {
            auto p = partition_from_json(text::read_file(partition_path));
            auto s = random ? select_seeds_random(p, min_size, rng_seed) : select_seeds(p, min_size);
            write_seed_list(s, out_path);
            log().info("selected {} seeds", s.size());
            return 0;
        });
        auto* check = seeds->add_subcommand("check", "Verify that the seeds reach every strongly connected node");
        check->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
        check->add_option("seeds", seeds_path)->required()->check(CLI::ExistingFile);
        check->add_option("--min-size", min_size)->capture_default_str()->check(CLI::PositiveNumber);
        bind(check, [&] {
            auto r = check_seed_coverage(graph_from_json(text::read_file(graph_path)), read_seed_list(seeds_path),
                                         min_size);
            std::printf("covered\t%zu\nuncovered\t%zu\nviolations\t%zu\n", r.covered.size(), r.uncovered.size(),
                        r.violations.size());
            for (const auto& v : r.violations) std::printf("violation\t%s\n", v.c_str());
            return r.ok() ? 0 : kCheckFailed;
        });
    }

    // annotate
    auto* annotate = app.add_subcommand("annotate", "Annotation sheets and agreement")->require_subcommand(1);
    std::vector<std::string> sheets;
    std::string tiebreak_path;
    {
        auto* exp = annotate->add_subcommand("export", "Write a blank annotation sheet for a seed list");
        exp->add_option("--seeds", seeds_path)->required()->check(CLI::ExistingFile);
        exp->add_option("--ontology", onto_path)->required()->check(CLI::ExistingFile);
        exp->add_flag("--lenient", lenient);
        exp->add_option("-o,--output", out_path)->required();
        bind(exp, [&] {
            auto o = load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict);
            auto n = export_sheet(read_seed_list(seeds_path), o, out_path);
            log().info("exported {} rows", n);
            return 0;
        });
        auto* kappa = annotate->add_subcommand("kappa", "Fleiss' kappa and raw agreement across sheets");
        kappa->add_option("sheets", sheets)->required()->expected(2, -1)->check(CLI::ExistingFile);
        bind(kappa, [&] {
            std::vector<fs::path> p(sheets.begin(), sheets.end());
            print_agreement(import_annotations(p));
            return 0;
        });
        auto* merge = annotate->add_subcommand("merge", "Adjudicate sheets into a gold standard");
        merge->add_option("sheets", sheets)->required()->expected(1, -1)->check(CLI::ExistingFile);
        merge->add_option("--tiebreak", tiebreak_path)->check(CLI::ExistingFile);
        merge->add_option("-o,--output", out_path)->required();
        bind(merge, [&] {
            std::vector<fs::path> p(sheets.begin(), sheets.end());
            auto set = import_annotations(p);
            std::map<std::string, Label, std::less<>> tb;
            if (!tiebreak_path.empty()) tb = read_tiebreak(tiebreak_path);
            std::vector<std::string> warnings;
            auto gold = adjudicate(set, tb, &warnings);
            for (const auto& w : warnings) log().warn("{}", w);
            write_gold(gold, out_path);
            if (set.annotators.size() >= 2) print_agreement(set);
            return 0;
        });
    }

    // expand
    auto* expand_cmd = app.add_subcommand("expand", "Bootstrap a labeled seed over ontology relations");
    std::string seed_path, uni_path, bi_path, algorithm = "default";
    int expansion_case = 0;
    std::size_t max_rounds = 0;
    {
        auto common = [&](CLI::App* c) {
            c->add_option("--ontology", onto_path)->check(CLI::ExistingFile);
            c->add_option("--seed", seed_path, "Gold standard or dataset file")->check(CLI::ExistingFile);
            c->add_option("--counts-uni", uni_path)->check(CLI::ExistingFile);
            c->add_option("--counts-bi", bi_path)->check(CLI::ExistingFile);
            c->add_option("--max-rounds", max_rounds, "0 runs to fixed point")->capture_default_str();
            c->add_flag("--lenient", lenient);
            c->add_option("-o,--output", out_path);
        };
        common(expand_cmd);
        expand_cmd->add_option("--case", expansion_case)->check(CLI::Range(1, 3));
        expand_cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember({"default", "pmi"}));
        auto* matrix = expand_cmd->add_subcommand("matrix", "Write Data-1..Data-6 into a directory");
        common(matrix);

        auto load_inputs = [&](bool need_counts) {
            if (onto_path.empty() || seed_path.empty() || out_path.empty())
                throw CLI::ValidationError("expand", "--ontology, --seed and -o are required");
            std::optional<NGramCounts> counts;
            if (!uni_path.empty() || !bi_path.empty()) {
                if (uni_path.empty() || bi_path.empty())
                    throw CLI::ValidationError("expand", "--counts-uni and --counts-bi go together");
                counts = load_counts(uni_path, bi_path);
            } else if (need_counts) {
                throw CLI::ValidationError("expand", "the pmi algorithm needs --counts-uni and --counts-bi");
            }
            return std::tuple{load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict),
                              read_seed(seed_path), std::move(counts)};
        };
        bind(expand_cmd, [&] {
            if (expansion_case == 0) throw CLI::ValidationError("expand", "--case is required");
            auto alg = require(parse_algorithm(algorithm), "--algorithm", algorithm);
            auto [o, seed, counts] = load_inputs(alg == Algorithm::pmi);
            auto cfg = ExpansionConfig::preset(expansion_case, alg);
            cfg.max_rounds = max_rounds;
            TrainingDataset d{"case-" + std::to_string(expansion_case) + "-" + algorithm, expansion_case, cfg,
                              expand(o, seed, cfg, counts ? &*counts : nullptr)};
            write_dataset(d, out_path);
            std::printf("%s\t%zu labeled\n", d.name.c_str(), d.labels.size());
            return 0;
        });
        bind(matrix, [&] {
            auto [o, seed, counts] = load_inputs(true);
            ExpansionConfig base;
            base.max_rounds = max_rounds;
            for (const auto& d : generate_training_matrix(o, seed, &*counts, base)) {
                write_dataset(d, fs::path(out_path) / (d.name + ".tsv"));
                std::printf("%s\t%zu labeled\n", d.name.c_str(), d.labels.size());
            }
            return 0;
        });
    }

    // docs
    auto* docs = app.add_subcommand("docs", "Gloss documents")->require_subcommand(1);
    std::string stemmer_path, tagger_path, keep_pos = "noun,adjective", vectors_path;
    {
        auto* build = docs->add_subcommand("build", "Turn every synset into a normalized token document");
        build->add_option("--ontology", onto_path)->required()->check(CLI::ExistingFile);
        build->add_option("--stemmer", stemmer_path, "Suffix rules TSV")->check(CLI::ExistingFile);
        build->add_option("--tagger", tagger_path, "Token-to-tag lexicon TSV")->check(CLI::ExistingFile);
        build->add_option("--keep-pos", keep_pos)->capture_default_str();
        build->add_option("--vectors", vectors_path, "Also write TF-IDF vectors");
        build->add_flag("--lenient", lenient);
        build->add_option("-o,--output", out_path)->required();
        bind(build, [&] {
            auto o = load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict);
            auto pipe = load_doc_pipeline(opt_path(stemmer_path), opt_path(tagger_path), parse_keep_pos(keep_pos));
            auto d = pipe.build(o);
            write_documents(d, out_path);
            if (!vectors_path.empty()) {
                auto vocab = build_vocabulary(d);
                std::vector<FeatureVector> v;
                for (const auto& doc : d) v.push_back(vectorize(doc.tokens, vocab, doc.id));
                text::write_file(vectors_path, format_vectors(v));
            }
            log().info("{} documents", d.size());
            return 0;
        });
    }

    // train
    auto* train = app.add_subcommand("train", "Tune by cross-validation and train a classifier");
    std::string data_path, docs_path, model_kind = "knn", grid, score = "macro-f", exclude_path;
    std::size_t folds = 10;
    bool shuffle = false;
    {
        train->add_option("--data", data_path, "Training dataset (or gold file)")->required()->check(CLI::ExistingFile);
        train->add_option("--docs", docs_path, "Documents from `docs build`")->required()->check(CLI::ExistingFile);
        train->add_option("--model", model_kind)->check(CLI::IsMember({"knn", "centroid", "rocchio"}))->capture_default_str();
        train->add_option("--grid", grid, "e.g. k=1,3,5;metric=cosine-distance or similarity=cosine");
        train->add_option("--folds", folds)->capture_default_str()->check(CLI::Range(2, 1000));
        train->add_option("--score", score)->check(CLI::IsMember({"macro-f", "accuracy"}))->capture_default_str();
        train->add_option("--exclude", exclude_path, "Gold file whose ids are withheld from training")
            ->check(CLI::ExistingFile);
        train->add_flag("--shuffle", shuffle, "Shuffle items before dealing folds");
        train->add_option("--rng-seed", rng_seed)->capture_default_str();
        train->add_option("-o,--output", out_path)->required();
        bind(train, [&] {
            auto kind = require(parse_model_kind(model_kind), "--model", model_kind);
            auto documents = read_documents(docs_path);
            auto vocab = build_vocabulary(documents);
            std::map<std::string, Label, std::less<>> labels;
            GoldStandard excluded;
            if (!exclude_path.empty()) excluded = read_gold(exclude_path);
            for (const auto& [id, e] : read_seed(data_path))
                if (!excluded.contains(id)) labels.emplace(id, e.label);
            auto data = labeled_vectors(labels, documents, vocab);
            auto g = grid.empty() ? default_grid(kind) : parse_grid(kind, grid);
            auto tuning = cross_validate(data, g, folds, require(parse_score_kind(score), "--score", score),
                                         shuffle ? std::optional(rng_seed) : std::nullopt);
            for (const auto& w : tuning.warnings) log().warn("{}", w);
            for (const auto& [p, s] : tuning.scores) std::printf("%s\t%.6f\n", p.describe().c_str(), s);
            Model model(tuning.best, vocab, data);
            model.metadata() = {{"dataset", fs::path(data_path).filename().string()},
                                {"training_items", std::to_string(data.size())},
                                {"cv_folds", std::to_string(tuning.folds)}};
            save_model(model, out_path);
            std::printf("best\t%s\n", tuning.best.describe().c_str());
            return 0;
        });
    }

    // predict
    auto* predict = app.add_subcommand("predict", "Label every document with a trained model");
    std::string model_path;
    {
        predict->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
        predict->add_option("--docs", docs_path)->required()->check(CLI::ExistingFile);
        predict->add_option("-o,--output", out_path)->required();
        bind(predict, [&] {
            auto model = load_model(model_path);
            auto documents = read_documents(docs_path);
            check_vocabulary(model, build_vocabulary(documents));
            Predictions pred;
            for (const auto& d : documents) pred.emplace(d.id, model.predict_tokens(d.tokens));
            write_predictions(pred, out_path);
            return 0;
        });
    }

    // eval
    auto* eval = app.add_subcommand("eval", "Score predictions against a gold standard");
    std::string pred_path, gold_path, dir_path, group_by = "algorithm", dataset_name, classifier_name;
    {
        eval->add_option("--pred", pred_path)->check(CLI::ExistingFile);
        eval->add_option("--gold", gold_path)->check(CLI::ExistingFile);
        eval->add_option("--dataset", dataset_name, "Dataset name recorded in the report");
        eval->add_option("--classifier", classifier_name, "Classifier name recorded in the report");
        eval->add_option("--case", expansion_case, "Expansion case recorded in the report");
        eval->add_option("--algorithm", algorithm)->check(CLI::IsMember({"default", "pmi"}));
        eval->add_option("-o,--output", out_path);
        auto* matrix = eval->add_subcommand("matrix", "Aggregate a directory of reports");
        matrix->add_option("--dir", dir_path)->required()->check(CLI::ExistingDirectory);
        matrix->add_option("--group-by", group_by)->check(CLI::IsMember({"algorithm", "case", "classifier"}));
        bind(eval, [&] {
            if (pred_path.empty() || gold_path.empty()) throw CLI::ValidationError("eval", "--pred and --gold are required");
            RunEntry entry{dataset_name, classifier_name, expansion_case,
                           require(parse_algorithm(algorithm), "--algorithm", algorithm),
                           evaluate(read_predictions(pred_path), read_gold(gold_path))};
            for (const auto& w : entry.report.warnings) log().warn("{}", w);
            std::fputs(format_report(entry).c_str(), stdout);
            if (!out_path.empty()) text::write_file(out_path, report_to_json(entry));
            return 0;
        });
        bind(matrix, [&] {
            auto m = load_run_matrix(dir_path);
            std::fputs(format_matrix(m).c_str(), stdout);
            std::fputs("\n", stdout);
            auto g = require(parse_grouping(group_by), "--group-by", group_by);
            std::fputs(format_aggregate(aggregate_by(m, g), group_by).c_str(), stdout);
            return 0;
        });
    }

    // lexicon
    auto* lexicon = app.add_subcommand("lexicon", "Build and inspect the sentiment lexicon")->require_subcommand(1);
    std::string train_path, format = "tsv", lexicon_path;
    {
        auto* build = lexicon->add_subcommand("build", "Label every synset: gold, then training, then classifier");
        build->add_option("--ontology", onto_path)->required()->check(CLI::ExistingFile);
        build->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
        build->add_option("--train", train_path)->required()->check(CLI::ExistingFile);
        build->add_option("--gold", gold_path)->required()->check(CLI::ExistingFile);
        build->add_option("--docs", docs_path, "Documents; rebuilt from the ontology when omitted")
            ->check(CLI::ExistingFile);
        build->add_option("--stemmer", stemmer_path)->check(CLI::ExistingFile);
        build->add_option("--tagger", tagger_path)->check(CLI::ExistingFile);
        build->add_option("--keep-pos", keep_pos)->capture_default_str();
        build->add_option("--format", format)->check(CLI::IsMember({"tsv", "jsonl"}))->capture_default_str();
        build->add_flag("--lenient", lenient);
        build->add_option("-o,--output", out_path)->required();
        bind(build, [&] {
            auto o = load_ontology(onto_path, lenient ? LoadMode::lenient : LoadMode::strict);
            auto documents = docs_path.empty()
                                 ? load_doc_pipeline(opt_path(stemmer_path), opt_path(tagger_path), parse_keep_pos(keep_pos))
                                       .build(o)
                                 : read_documents(docs_path);
            auto lex = build_lexicon(o, read_seed(train_path), read_gold(gold_path), load_model(model_path), documents);
            export_lexicon(lex, out_path, format == "jsonl" ? LexiconFormat::jsonl : LexiconFormat::tsv);
            std::fputs(format_lexicon_stats(lexicon_stats(lex)).c_str(), stdout);
            return 0;
        });
        auto* stats = lexicon->add_subcommand("stats", "Counts by label and source");
        stats->add_option("path", lexicon_path)->required()->check(CLI::ExistingFile);
        bind(stats, [&] {
            std::fputs(format_lexicon_stats(lexicon_stats(import_lexicon(lexicon_path))).c_str(), stdout);
            return 0;
        });
    }

    // run / config
    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the full pipeline from a project config");
    run->add_option("--config", config_path)->required();
    bind(run, [&] {
        auto r = run_pipeline(fs::path(config_path));
        for (const auto& s : r.stages) std::printf("%-9s %s\n", s.name.c_str(), s.skipped ? "up to date" : "done");
        (r.status == ExitStatus::ok ? std::cout : std::cerr) << r.message << "\n";
        return static_cast<int>(r.status);
    });
    auto* config = app.add_subcommand("config", "Project configuration")->require_subcommand(1);
    auto* validate = config->add_subcommand("validate", "Resolve and check a project config");
    validate->add_option("path", config_path)->required();
    bind(validate, [&] {
        auto r = validate_config(config_path);
        for (const auto& line : r.resolved) std::printf("%s\n", line.c_str());
        for (const auto& p : r.pending) std::printf("pending annotation: %s\n", p.c_str());
        for (const auto& e : r.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
        return r.ok ? 0 : static_cast<int>(ExitStatus::config_error);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitStatus::config_error);
    }
    try {
        return action ? action() : 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitStatus::config_error);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitStatus::config_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitStatus::stage_failure);
    }
}
