#include "lexforge/classify.hpp"

#include "lexforge/error.hpp"
#include "lexforge/log.hpp"
#include "lexforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>

namespace lexforge {

using nlohmann::ordered_json;

std::string_view to_string(Metric m) noexcept { return m == Metric::cosine_distance ? "cosine-distance" : "euclidean"; }

std::string_view to_string(Similarity s) noexcept { return s == Similarity::cosine ? "cosine" : "negative-euclidean"; }

std::string_view to_string(ModelKind k) noexcept { return k == ModelKind::knn ? "knn" : "centroid"; }

std::optional<Metric> parse_metric(std::string_view s) noexcept {
    if (s == "cosine-distance" || s == "cosine") return Metric::cosine_distance;
    if (s == "euclidean") return Metric::euclidean;
    return std::nullopt;
}

std::optional<Similarity> parse_similarity(std::string_view s) noexcept {
    if (s == "cosine") return Similarity::cosine;
    if (s == "negative-euclidean" || s == "euclidean") return Similarity::negative_euclidean;
    return std::nullopt;
}

std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept {
    if (s == "knn") return ModelKind::knn;
    if (s == "centroid" || s == "rocchio") return ModelKind::centroid;
    return std::nullopt;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
    double sum = 0.0;
    auto i = a.entries.begin(), j = b.entries.begin();
    while (i != a.entries.end() && j != b.entries.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            sum += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return sum;
}

double norm(const FeatureVector& v) {
    double sq = 0.0;
    for (const auto& [_, w] : v.entries) sq += w * w;
    return std::sqrt(sq);
}

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
    double sq = 0.0;
    auto i = a.entries.begin(), j = b.entries.begin();
    while (i != a.entries.end() || j != b.entries.end()) {
        double d;
        if (j == b.entries.end() || (i != a.entries.end() && i->first < j->first)) {
            d = i->second;
            ++i;
        } else if (i == a.entries.end() || j->first < i->first) {
            d = j->second;
            ++j;
        } else {
            d = i->second - j->second;
            ++i;
            ++j;
        }
        sq += d * d;
    }
    return std::sqrt(sq);
}

double cosine_distance(const FeatureVector& a, const FeatureVector& b) {
    const double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 2.0;
    // snapped so that colinear vectors tie exactly regardless of scale;
    // otherwise rounding noise, not training order, would break the tie
    return std::round((1.0 - dot(a, b) / (na * nb)) * 1e12) / 1e12;
}

Label majority_label(const Dataset& dataset) {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (const auto& item : dataset) ++counts[label_index(item.label)];
    std::size_t best = 0;
    for (std::size_t c = 1; c < 3; ++c)
        if (counts[c] > counts[best]) best = c;
    return kLabelOrder[best];
}

KnnModel::KnnModel(Dataset data, std::size_t k, Metric metric)
    : data_(std::move(data)), k_(k), metric_(metric), majority_(majority_label(data_)) {
    if (data_.empty()) throw Error("KNN needs a non-empty training set");
    if (k_ < 1) throw Error("KNN needs k >= 1");
    if (k_ > data_.size())
        throw Error("k = " + std::to_string(k_) + " exceeds the " + std::to_string(data_.size()) + " training vectors");
}

std::vector<std::size_t> KnnModel::neighbors(const FeatureVector& query) const {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        double d = metric_ == Metric::cosine_distance ? cosine_distance(query, data_[i].vector)
                                                      : euclidean_distance(query, data_[i].vector);
        scored.emplace_back(d, i);
    }
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k_), scored.end());
    std::vector<std::size_t> out;
    out.reserve(k_);
    for (std::size_t i = 0; i < k_; ++i) out.push_back(scored[i].second);
    return out;
}

KnnModel train_knn(Dataset dataset, std::size_t k, Metric metric) { return KnnModel(std::move(dataset), k, metric); }

Label predict_knn(const KnnModel& model, const FeatureVector& query) {
    if (query.empty()) return model.majority();
    auto nearest = model.neighbors(query);
    std::array<std::size_t, 3> votes{0, 0, 0};
    for (auto i : nearest) ++votes[label_index(model.data()[i].label)];
    const auto top = *std::max_element(votes.begin(), votes.end());
    for (auto i : nearest) {
        auto l = model.data()[i].label;
        if (votes[label_index(l)] == top) return l;
    }
    return model.majority();
}

CentroidModel::CentroidModel(std::map<Label, FeatureVector> centroids, Similarity similarity, Label majority)
    : centroids_(std::move(centroids)), similarity_(similarity), majority_(majority) {
    if (centroids_.empty()) throw Error("a centroid model needs at least one category");
}

CentroidModel train_centroid(const Dataset& dataset, Similarity similarity) {
    if (dataset.empty()) throw Error("nearest centroid needs a non-empty training set");
    std::map<Label, std::map<std::uint32_t, double>> sums;
    std::map<Label, std::size_t> counts;
    for (const auto& item : dataset) {
        auto& acc = sums[item.label];
        for (const auto& [i, w] : item.vector.entries) acc[i] += w;
        ++counts[item.label];
    }
    std::map<Label, FeatureVector> centroids;
    for (const auto& [label, acc] : sums) {
        FeatureVector c;
        c.id = std::string(to_string(label));
        const double n = static_cast<double>(counts[label]);
        for (const auto& [i, w] : acc) c.entries.emplace_back(i, w / n);
        centroids.emplace(label, std::move(c));
    }
    return CentroidModel(std::move(centroids), similarity, majority_label(dataset));
}

Label predict_centroid(const CentroidModel& model, const FeatureVector& query) {
    if (query.empty()) return model.majority();
    const double qn = norm(query);
    std::optional<Label> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (auto label : kLabelOrder) {
        auto it = model.centroids().find(label);
        if (it == model.centroids().end()) continue;
        double score;
        if (model.similarity() == Similarity::cosine) {
            const double cn = norm(it->second);
            score = cn == 0.0 ? -std::numeric_limits<double>::infinity()
                              : std::round(dot(query, it->second) / (qn * cn) * 1e12) / 1e12;
        } else {
            score = -euclidean_distance(query, it->second);
        }
        if (!best || score > best_score) {
            best = label;
            best_score = score;
        }
    }
    return *best;
}

std::string ClassifierParams::describe() const {
    if (kind == ModelKind::knn) return "knn k=" + std::to_string(k) + " metric=" + std::string(to_string(metric));
    return "centroid similarity=" + std::string(to_string(similarity));
}

std::vector<ClassifierParams> default_grid(ModelKind kind) {
    std::vector<ClassifierParams> grid;
    if (kind == ModelKind::knn) {
        for (std::size_t k : {1, 3, 5, 7, 9, 15, 21, 31})
            for (auto m : {Metric::cosine_distance, Metric::euclidean})
                grid.push_back({ModelKind::knn, k, m, Similarity::cosine});
    } else {
        for (auto s : {Similarity::cosine, Similarity::negative_euclidean})
            grid.push_back({ModelKind::centroid, 1, Metric::cosine_distance, s});
    }
    return grid;
}

std::vector<ClassifierParams> parse_grid(ModelKind kind, std::string_view spec) {
    std::vector<std::size_t> ks{1, 3, 5, 7, 9, 15, 21, 31};
    std::vector<Metric> metrics{Metric::cosine_distance, Metric::euclidean};
    std::vector<Similarity> sims{Similarity::cosine, Similarity::negative_euclidean};
    for (const auto& clause : text::split(spec, ';')) {
        auto c = text::trim(clause);
        if (c.empty()) continue;
        auto eq = c.find('=');
        if (eq == std::string_view::npos) throw Error("grid clause '" + std::string(c) + "' lacks '='");
        auto key = text::trim(c.substr(0, eq));
        auto values = text::split(text::trim(c.substr(eq + 1)), ',');
        if (key == "k") {
            ks.clear();
            for (const auto& v : values) {
                std::size_t k = 0;
                auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
                if (ec != std::errc{} || ptr != v.data() + v.size() || k == 0)
                    throw Error("bad k value '" + v + "'");
                ks.push_back(k);
            }
        } else if (key == "metric") {
            metrics.clear();
            for (const auto& v : values) {
                auto m = parse_metric(v);
                if (!m) throw Error("unknown metric '" + v + "'");
                metrics.push_back(*m);
            }
        } else if (key == "similarity") {
            sims.clear();
            for (const auto& v : values) {
                auto s = parse_similarity(v);
                if (!s) throw Error("unknown similarity '" + v + "'");
                sims.push_back(*s);
            }
        } else {
            throw Error("unknown grid key '" + std::string(key) + "'");
        }
    }
    std::vector<ClassifierParams> grid;
    if (kind == ModelKind::knn) {
        for (auto k : ks)
            for (auto m : metrics) grid.push_back({ModelKind::knn, k, m, Similarity::cosine});
    } else {
        for (auto s : sims) grid.push_back({ModelKind::centroid, 1, Metric::cosine_distance, s});
    }
    return grid;
}

std::vector<std::size_t> assign_folds(const Dataset& dataset, std::size_t folds, std::optional<std::uint64_t> rng_seed,
                                      std::vector<std::string>* warnings) {
    if (folds < 2) throw Error("cross-validation needs at least 2 folds");
    if (dataset.size() < folds)
        throw Error("cross-validation needs at least as many items (" + std::to_string(dataset.size()) +
                    ") as folds (" + std::to_string(folds) + ")");
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dataset[a].vector.id < dataset[b].vector.id; });
    if (rng_seed) {
        // explicit Fisher-Yates: std::shuffle's sequence is library-specific
        std::mt19937_64 rng(*rng_seed);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    }

    std::vector<std::size_t> fold(dataset.size(), 0);
    std::size_t dealt = 0;
    for (auto label : kLabelOrder) {
        std::size_t members = 0;
        for (auto i : order) {
            if (dataset[i].label != label) continue;
            fold[i] = dealt++ % folds;
            ++members;
        }
        if (members > 0 && members < folds) {
            auto msg = std::string(to_string(label)) + " has " + std::to_string(members) + " items for " +
                       std::to_string(folds) + " folds; not stratified";
            log().warn("{}", msg);
            if (warnings) warnings->push_back(msg);
        }
    }
    return fold;
}

namespace {

std::tuple<int, std::size_t, int, int> tie_key(const ClassifierParams& p) {
    return {static_cast<int>(p.kind), p.k, static_cast<int>(p.metric), static_cast<int>(p.similarity)};
}

Label predict_with(const std::variant<KnnModel, CentroidModel>& impl, const FeatureVector& v) {
    if (const auto* knn = std::get_if<KnnModel>(&impl)) return predict_knn(*knn, v);
    return predict_centroid(std::get<CentroidModel>(impl), v);
}

std::variant<KnnModel, CentroidModel> train_impl(const ClassifierParams& params, const Dataset& training) {
    if (params.kind == ModelKind::knn) return train_knn(training, params.k, params.metric);
    return train_centroid(training, params.similarity);
}

} // namespace

TuningResult cross_validate(const Dataset& dataset, const std::vector<ClassifierParams>& grid, std::size_t folds,
                            ScoreKind score, std::optional<std::uint64_t> rng_seed) {
    if (grid.empty()) throw Error("cross-validation needs a non-empty parameter grid");
    TuningResult result;
    result.folds = folds;
    auto fold = assign_folds(dataset, folds, rng_seed, &result.warnings);

    std::vector<Dataset> train(folds), test(folds);
    for (std::size_t f = 0; f < folds; ++f)
        for (std::size_t i = 0; i < dataset.size(); ++i) (fold[i] == f ? test : train)[f].push_back(dataset[i]);

    std::optional<std::size_t> best;
    for (const auto& params : grid) {
        bool feasible = true;
        double total = 0.0;
        std::size_t used = 0;
        for (std::size_t f = 0; f < folds && feasible; ++f) {
            if (test[f].empty()) continue;
            if (params.kind == ModelKind::knn && params.k > train[f].size()) {
                feasible = false;
                break;
            }
            auto impl = train_impl(params, train[f]);
            std::vector<Label> gold, pred;
            for (const auto& item : test[f]) {
                gold.push_back(item.label);
                pred.push_back(predict_with(impl, item.vector));
            }
            total += score_value(score_labels(gold, pred), score);
            ++used;
        }
        if (!feasible || used == 0) {
            result.warnings.push_back(params.describe() + " skipped: k exceeds a training fold");
            continue;
        }
        result.scores.emplace_back(params, total / static_cast<double>(used));
        const auto& [cand, mean] = result.scores.back();
        if (!best) {
            best = result.scores.size() - 1;
            continue;
        }
        const auto& [incumbent, best_mean] = result.scores[*best];
        if (mean > best_mean || (mean == best_mean && tie_key(cand) < tie_key(incumbent)))
            best = result.scores.size() - 1;
    }
    if (!best) throw Error("no grid assignment is feasible for this dataset");
    result.best = result.scores[*best].first;
    return result;
}

Model::Model(ClassifierParams params, Vocabulary vocabulary, const Dataset& training)
    : params_(params), vocabulary_(std::move(vocabulary)), impl_(train_impl(params, training)) {}

Model::Model(ClassifierParams params, Vocabulary vocabulary, std::variant<KnnModel, CentroidModel> impl)
    : params_(params), vocabulary_(std::move(vocabulary)), impl_(std::move(impl)) {}

Label Model::predict(const FeatureVector& v) const { return predict_with(impl_, v); }

Label Model::predict_tokens(const std::vector<std::string>& tokens) const {
    return predict(vectorize(tokens, vocabulary_));
}

namespace {

ordered_json entries_json(const FeatureVector& v) {
    auto arr = ordered_json::array();
    for (const auto& [i, w] : v.entries) arr.push_back(ordered_json::array({i, w}));
    return arr;
}

FeatureVector entries_from(const ordered_json& arr, std::string id) {
    FeatureVector v;
    v.id = std::move(id);
    for (const auto& e : arr) v.entries.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<double>());
    return v;
}

Label label_field(const ordered_json& j) {
    auto l = parse_label(j.get<std::string>());
    if (!l) throw Error("bad label in model file");
    return *l;
}

} // namespace

std::string Model::to_json() const {
    ordered_json j;
    j["format"] = "lexforge-model/1";
    j["kind"] = to_string(params_.kind);
    ordered_json params;
    if (params_.kind == ModelKind::knn) {
        params["k"] = params_.k;
        params["metric"] = to_string(params_.metric);
    } else {
        params["similarity"] = to_string(params_.similarity);
    }
    j["params"] = std::move(params);
    j["metadata"] = metadata_;
    j["vocabulary"] = {{"checksum", vocabulary_.checksum()},
                       {"documents", vocabulary_.documents()},
                       {"terms", vocabulary_.terms()},
                       {"df", vocabulary_.document_frequency()}};
    if (const auto* knn = std::get_if<KnnModel>(&impl_)) {
        j["majority"] = to_string(knn->majority());
        auto vectors = ordered_json::array();
        for (const auto& item : knn->data())
            vectors.push_back(
                {{"id", item.vector.id}, {"label", to_string(item.label)}, {"entries", entries_json(item.vector)}});
        j["vectors"] = std::move(vectors);
    } else {
        const auto& c = std::get<CentroidModel>(impl_);
        j["majority"] = to_string(c.majority());
        auto centroids = ordered_json::array();
        for (const auto& [label, v] : c.centroids())
            centroids.push_back({{"label", to_string(label)}, {"entries", entries_json(v)}});
        j["centroids"] = std::move(centroids);
    }
    return j.dump() + "\n";
}

Model Model::from_json(std::string_view json) {
    try {
        auto j = ordered_json::parse(json);
        if (j.value("format", std::string{}) != "lexforge-model/1") throw Error("not a lexforge model file");
        auto kind = parse_model_kind(j.at("kind").get<std::string>());
        if (!kind) throw Error("unknown model kind");
        const auto& vj = j.at("vocabulary");
        Vocabulary vocab(vj.at("terms").get<std::vector<std::string>>(), vj.at("df").get<std::vector<std::size_t>>(),
                         vj.at("documents").get<std::size_t>());
        if (vocab.checksum() != vj.at("checksum").get<std::string>())
            throw Error("model vocabulary does not match its recorded checksum");

        ClassifierParams params;
        params.kind = *kind;
        const auto& pj = j.at("params");
        auto majority = label_field(j.at("majority"));
        std::optional<Model> model;
        if (*kind == ModelKind::knn) {
            params.k = pj.at("k").get<std::size_t>();
            auto metric = parse_metric(pj.at("metric").get<std::string>());
            if (!metric) throw Error("unknown metric in model file");
            params.metric = *metric;
            Dataset data;
            for (const auto& v : j.at("vectors"))
                data.push_back({entries_from(v.at("entries"), v.at("id").get<std::string>()), label_field(v.at("label"))});
            model.emplace(Model(params, std::move(vocab), KnnModel(std::move(data), params.k, params.metric)));
        } else {
            auto sim = parse_similarity(pj.at("similarity").get<std::string>());
            if (!sim) throw Error("unknown similarity in model file");
            params.similarity = *sim;
            std::map<Label, FeatureVector> centroids;
            for (const auto& c : j.at("centroids")) {
                auto label = label_field(c.at("label"));
                centroids.emplace(label, entries_from(c.at("entries"), std::string(to_string(label))));
            }
            model.emplace(Model(params, std::move(vocab), CentroidModel(std::move(centroids), *sim, majority)));
        }
        model->metadata_ = j.value("metadata", std::map<std::string, std::string>{});
        return std::move(*model);
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const Model& model, const std::filesystem::path& path) { text::write_file(path, model.to_json()); }

Model load_model(const std::filesystem::path& path) { return Model::from_json(text::read_file(path)); }

void check_vocabulary(const Model& model, const Vocabulary& documents_vocabulary) {
    if (model.vocabulary().checksum() != documents_vocabulary.checksum())
        throw Error("vocabulary mismatch: model " + model.vocabulary().checksum() + ", documents " +
                    documents_vocabulary.checksum() + " (documents were not built from the model's corpus)");
}

Dataset labeled_vectors(const std::map<std::string, Label, std::less<>>& labels,
                        const std::vector<GlossDocument>& documents, const Vocabulary& vocabulary) {
    std::map<std::string_view, const GlossDocument*> by_id;
    for (const auto& d : documents) by_id.emplace(d.id, &d);
    Dataset out;
    out.reserve(labels.size());
    for (const auto& [id, label] : labels) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw Error("no document for labeled id " + id);
        out.push_back({vectorize(it->second->tokens, vocabulary, id), label});
    }
    return out;
}

} // namespace lexforge
