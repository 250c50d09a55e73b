#pragma once

#include "lexforge/docpipe.hpp"
#include "lexforge/evaluate.hpp"
#include "lexforge/label.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lexforge {

enum class Metric { cosine_distance, euclidean };
enum class Similarity { cosine, negative_euclidean };
enum class ModelKind { knn, centroid };

std::string_view to_string(Metric m) noexcept;
std::string_view to_string(Similarity s) noexcept;
std::string_view to_string(ModelKind k) noexcept;
std::optional<Metric> parse_metric(std::string_view s) noexcept;
std::optional<Similarity> parse_similarity(std::string_view s) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept;

struct LabeledVector {
    FeatureVector vector;
    Label label{};
};

using Dataset = std::vector<LabeledVector>;

// sparse helpers
double dot(const FeatureVector& a, const FeatureVector& b);
double norm(const FeatureVector& v);
double euclidean_distance(const FeatureVector& a, const FeatureVector& b);
/// 1 - cos; an empty operand yields the maximal distance 2.
double cosine_distance(const FeatureVector& a, const FeatureVector& b);

/// Most frequent label; ties go to the earliest in kLabelOrder.
Label majority_label(const Dataset& dataset);

/// Lazy learner: keeps every training vector.
class KnnModel {
public:
    KnnModel(Dataset data, std::size_t k, Metric metric);

    const Dataset& data() const noexcept { return data_; }
    std::size_t k() const noexcept { return k_; }
    Metric metric() const noexcept { return metric_; }
    Label majority() const noexcept { return majority_; }

    /// Indices of the k nearest training vectors, nearest first; equal
    /// distances keep training order.
    std::vector<std::size_t> neighbors(const FeatureVector& query) const;

private:
    Dataset data_;
    std::size_t k_;
    Metric metric_;
    Label majority_;
};

KnnModel train_knn(Dataset dataset, std::size_t k, Metric metric);

/// Majority vote among the k nearest; a tied vote goes to the tied label
/// whose closest member ranks first. Empty queries get the training majority.
Label predict_knn(const KnnModel& model, const FeatureVector& query);

class CentroidModel {
public:
    CentroidModel(std::map<Label, FeatureVector> centroids, Similarity similarity, Label majority);

    /// Arithmetic mean per category, not re-normalized.
    const std::map<Label, FeatureVector>& centroids() const noexcept { return centroids_; }
    Similarity similarity() const noexcept { return similarity_; }
    Label majority() const noexcept { return majority_; }

private:
    std::map<Label, FeatureVector> centroids_;
    Similarity similarity_;
    Label majority_;
};

CentroidModel train_centroid(const Dataset& dataset, Similarity similarity);

/// Argmax similarity; ties resolve in kLabelOrder.
Label predict_centroid(const CentroidModel& model, const FeatureVector& query);

struct ClassifierParams {
    ModelKind kind = ModelKind::knn;
    std::size_t k = 1;
    Metric metric = Metric::cosine_distance;
    Similarity similarity = Similarity::cosine;

    std::string describe() const;
    friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

/// KNN: k in {1,3,5,7,9,15,21,31} x both metrics. Centroid: both similarities.
std::vector<ClassifierParams> default_grid(ModelKind kind);

/// Grid spec such as "k=1,3,5;metric=cosine-distance,euclidean" or
/// "similarity=cosine". Missing keys fall back to the default grid's values.
std::vector<ClassifierParams> parse_grid(ModelKind kind, std::string_view spec);

struct TuningResult {
    ClassifierParams best;
    std::vector<std::pair<ClassifierParams, double>> scores;
    std::size_t folds = 0;
    std::vector<std::string> warnings;
};

/// Fold index per item. Items are ordered by id (or shuffled from that
/// order when an rng seed is given), grouped by category in kLabelOrder,
/// then dealt round-robin with one running counter.
std::vector<std::size_t> assign_folds(const Dataset& dataset, std::size_t folds,
                                      std::optional<std::uint64_t> rng_seed = std::nullopt,
                                      std::vector<std::string>* warnings = nullptr);

TuningResult cross_validate(const Dataset& dataset, const std::vector<ClassifierParams>& grid, std::size_t folds,
                            ScoreKind score = ScoreKind::macro_f,
                            std::optional<std::uint64_t> rng_seed = std::nullopt);

/// A trained classifier bundled with the vocabulary it was vectorized against.
class Model {
public:
    Model(ClassifierParams params, Vocabulary vocabulary, const Dataset& training);

    const ClassifierParams& params() const noexcept { return params_; }
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    Label predict(const FeatureVector& v) const;
    /// Vectorizes the tokens against the stored vocabulary first.
    Label predict_tokens(const std::vector<std::string>& tokens) const;

    std::map<std::string, std::string>& metadata() noexcept { return metadata_; }
    const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

    std::string to_json() const;
    static Model from_json(std::string_view json);

private:
    Model(ClassifierParams params, Vocabulary vocabulary, std::variant<KnnModel, CentroidModel> impl);

    ClassifierParams params_;
    Vocabulary vocabulary_;
    std::variant<KnnModel, CentroidModel> impl_;
    std::map<std::string, std::string> metadata_;
};

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// Throws when `documents` produce a different vocabulary than the model's.
void check_vocabulary(const Model& model, const Vocabulary& documents_vocabulary);

/// Vectors for each labeled id, looked up in `documents`.
Dataset labeled_vectors(const std::map<std::string, Label, std::less<>>& labels,
                        const std::vector<GlossDocument>& documents, const Vocabulary& vocabulary);

} // namespace lexforge
