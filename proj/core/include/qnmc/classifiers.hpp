#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qnmc/dataset.hpp"
#include "qnmc/encoding.hpp"
#include "qnmc/matrix.hpp"

namespace qnmc {

enum class ClassifierKind { NMC, QNMC, LDA, QDA };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

/// What to train. encoder must be present exactly when kind is QNMC;
/// regularization applies to LDA/QDA covariances only.
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::NMC;
    std::optional<EncoderKind> encoder;
    double regularization = 1e-6;
    std::string name;  // display name; empty = derived from kind/encoder

    std::string display_name() const;
    void validate() const;
};

struct NmcState {
    std::vector<std::vector<double>> centroids;
};

struct QnmcState {
    std::vector<DensityMatrix> centroids;
};

struct LdaState {
    std::vector<std::vector<double>> means;
    std::vector<double> priors;
    SymMatrix covariance;  // pooled within-class, after regularization
    // Derived at fit/load time, not serialized:
    SymMatrix inverse;
    std::vector<std::vector<double>> linear;  // inverse * mean_j
    std::vector<double> bias;                 // -mean_j.linear_j/2 + ln prior_j
};

struct QdaState {
    std::vector<std::vector<double>> means;
    std::vector<double> priors;
    std::vector<SymMatrix> covariances;  // per class, after regularization
    // Derived at fit/load time, not serialized:
    std::vector<SymMatrix> inverses;
    std::vector<double> log_dets;
};

/// Fitted classifier. labels is the tie-breaking order (first appearance
/// in the training set); weights is the rescaling applied to every raw
/// input at both fit and predict time, so the two can never diverge.
struct TrainedModel {
    ClassifierSpec spec;
    std::vector<std::string> labels;
    std::vector<std::string> feature_names;
    RescaleWeights weights;
    std::variant<NmcState, QnmcState, LdaState, QdaState> state;

    std::size_t dim() const { return feature_names.size(); }
};

// --- the common fit/predict contract ----------------------------------------

TrainedModel fit(const ClassifierSpec& spec, const Dataset& train);
TrainedModel fit(const ClassifierSpec& spec, const Dataset& train,
                 const RescaleWeights& weights);

/// Label of the winning class for one pattern; always an element of
/// model.labels, ties resolved to the lowest label index.
std::string predict(const TrainedModel& model, const FeatureVector& x);

std::vector<std::string> predict_all(const TrainedModel& model, const Dataset& test);

// --- per-classifier entry points ---------------------------------------------

/// Class centroids = per-class arithmetic means of the feature vectors.
TrainedModel fit_nmc(const Dataset& train);
/// Euclidean-nearest centroid.
std::string predict_nmc(const TrainedModel& model, const FeatureVector& x);

/// Quantum centroids = per-class arithmetic means of the encoded
/// density patterns; the encoder and weights are stored in the model.
TrainedModel fit_qnmc(const Dataset& train, EncoderKind encoder,
                      const RescaleWeights& weights);
/// Trace-distance-nearest quantum centroid.
std::string predict_qnmc(const TrainedModel& model, const FeatureVector& x);

/// Gaussian discriminant with pooled within-class covariance
/// sum_j ((M_j-1)/(M-n)) S_j, ridge-regularized by
/// reg * (trace/d) * I; empirical class priors.
TrainedModel fit_lda(const Dataset& train, double reg = 1e-6);
std::string predict_lda(const TrainedModel& model, const FeatureVector& x);

/// Gaussian discriminant with per-class covariances, each regularized as
/// in LDA; quadratic decision surfaces.
TrainedModel fit_qda(const Dataset& train, double reg = 1e-6);
std::string predict_qda(const TrainedModel& model, const FeatureVector& x);

// --- model persistence --------------------------------------------------------

/// Versioned, self-describing JSON document carrying the spec, labels
/// and all per-class numeric state at full 64-bit round-trip precision.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace qnmc
