#include "qnmc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qnmc/error.hpp"

namespace qnmc {

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::NMC: return "nmc";
        case ClassifierKind::QNMC: return "qnmc";
        case ClassifierKind::LDA: return "lda";
        case ClassifierKind::QDA: return "qda";
    }
    return "nmc";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "nmc") return ClassifierKind::NMC;
    if (lower == "qnmc") return ClassifierKind::QNMC;
    if (lower == "lda") return ClassifierKind::LDA;
    if (lower == "qda") return ClassifierKind::QDA;
    throw ConfigError("unknown classifier kind '" + name +
                      "' (expected nmc, qnmc, lda or qda)");
}

std::string ClassifierSpec::display_name() const {
    if (!name.empty()) {
        return name;
    }
    switch (kind) {
        case ClassifierKind::NMC: return "NMC";
        case ClassifierKind::QNMC:
            return encoder ? "QNMC (" + qnmc::to_string(*encoder) + ")" : "QNMC";
        case ClassifierKind::LDA: return "LDA";
        case ClassifierKind::QDA: return "QDA";
    }
    return "NMC";
}

void ClassifierSpec::validate() const {
    if (kind == ClassifierKind::QNMC && !encoder) {
        throw ConfigError("classifier '" + display_name() + "': qnmc requires an encoder");
    }
    if (kind != ClassifierKind::QNMC && encoder) {
        throw ConfigError("classifier '" + display_name() +
                          "': encoder is only valid for qnmc");
    }
    if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
        throw ConfigError("classifier '" + display_name() +
                          "': regularization must be finite and >= 0");
    }
}

namespace {

/// Training patterns grouped by class, rescaled, in label_set order.
struct GroupedData {
    std::vector<std::string> labels;
    std::vector<std::vector<std::vector<double>>> values;  // per class, per pattern
    std::size_t total = 0;
};

GroupedData group_by_class(const Dataset& train, const RescaleWeights& weights,
                           std::size_t min_class_size) {
    if (train.size() == 0) {
        throw DataError("fit: empty training set");
    }
    if (weights.dim() != train.dim()) {
        throw DataError("fit: weight vector has " + std::to_string(weights.dim()) +
                        " entries but dataset has " + std::to_string(train.dim()) +
                        " features");
    }
    GroupedData grouped;
    grouped.labels = train.label_set;
    if (grouped.labels.empty()) {
        throw DataError("fit: training set has no labels");
    }
    grouped.values.resize(grouped.labels.size());
    for (const auto& p : train.patterns) {
        if (!p.label) {
            throw DataError("fit: unlabeled pattern in training set");
        }
        const auto it = std::find(grouped.labels.begin(), grouped.labels.end(), *p.label);
        if (it == grouped.labels.end()) {
            throw DataError("fit: pattern label '" + *p.label + "' missing from label_set");
        }
        FeatureVector scaled = rescale(p, weights);
        grouped.values[static_cast<std::size_t>(it - grouped.labels.begin())].push_back(
            std::move(scaled.values));
        ++grouped.total;
    }
    for (std::size_t c = 0; c < grouped.labels.size(); ++c) {
        if (grouped.values[c].size() < min_class_size) {
            throw DataError("fit: class '" + grouped.labels[c] + "' has " +
                            std::to_string(grouped.values[c].size()) +
                            " pattern(s), need at least " + std::to_string(min_class_size));
        }
    }
    return grouped;
}

std::vector<double> class_mean(const std::vector<std::vector<double>>& rows) {
    std::vector<double> mean(rows.front().size(), 0.0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < mean.size(); ++i) {
            mean[i] += row[i];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(rows.size());
    }
    return mean;
}

/// Unbiased sample covariance around the given mean.
SymMatrix sample_covariance(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& mean) {
    const std::size_t d = mean.size();
    SymMatrix cov(d);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = row[i] - mean[i];
            for (std::size_t j = i; j < d; ++j) {
                cov.set(i, j, cov(i, j) + di * (row[j] - mean[j]));
            }
        }
    }
    return cov.scaled(1.0 / static_cast<double>(rows.size() - 1));
}

SymMatrix regularize(const SymMatrix& cov, double reg) {
    const std::size_t d = cov.dim();
    const double ridge = reg * cov.trace() / static_cast<double>(d);
    SymMatrix out = cov;
    for (std::size_t i = 0; i < d; ++i) {
        out.set(i, i, out(i, i) + ridge);
    }
    return out;
}

struct InverseResult {
    SymMatrix inverse;
    double log_det;
};

/// Spectral inverse: eigenvalues below 1e-12 * lambda_max mean the
/// covariance is singular even after regularization.
InverseResult invert_covariance(const SymMatrix& cov, const std::string& what) {
    const EigenResult eig = sym_eigen(cov);
    const std::size_t d = cov.dim();
    const double lambda_max = eig.eigenvalues.back();
    if (!(lambda_max > 0.0) || eig.eigenvalues.front() <= 1e-12 * lambda_max) {
        throw NumericError(what + ": covariance is singular after regularization");
    }
    SymMatrix inv(d);
    double log_det = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        log_det += std::log(eig.eigenvalues[k]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                s += eig.eigenvectors[k][i] * eig.eigenvectors[k][j] / eig.eigenvalues[k];
            }
            inv.set(i, j, s);
        }
    }
    return {inv, log_det};
}

std::vector<double> mat_vec(const SymMatrix& m, const std::vector<double>& v) {
    std::vector<double> out(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.dim(); ++j) {
            s += m(i, j) * v[j];
        }
        out[i] = s;
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

LdaState finalize_lda(std::vector<std::vector<double>> means, std::vector<double> priors,
                      SymMatrix covariance) {
    const InverseResult inv = invert_covariance(covariance, "lda");
    std::vector<std::vector<double>> linear;
    std::vector<double> bias;
    for (std::size_t c = 0; c < means.size(); ++c) {
        linear.push_back(mat_vec(inv.inverse, means[c]));
        bias.push_back(-0.5 * dot(means[c], linear.back()) + std::log(priors[c]));
    }
    return LdaState{std::move(means), std::move(priors), std::move(covariance),
                    inv.inverse, std::move(linear), std::move(bias)};
}

QdaState finalize_qda(std::vector<std::vector<double>> means, std::vector<double> priors,
                      std::vector<SymMatrix> covariances) {
    std::vector<SymMatrix> inverses;
    std::vector<double> log_dets;
    for (std::size_t c = 0; c < covariances.size(); ++c) {
        const InverseResult inv = invert_covariance(covariances[c], "qda class " +
                                                                        std::to_string(c));
        inverses.push_back(inv.inverse);
        log_dets.push_back(inv.log_det);
    }
    return QdaState{std::move(means), std::move(priors), std::move(covariances),
                    std::move(inverses), std::move(log_dets)};
}

FeatureVector prepare_input(const TrainedModel& model, const FeatureVector& x) {
    if (x.dim() != model.dim()) {
        throw DataError("predict: pattern has " + std::to_string(x.dim()) +
                        " features, model expects " + std::to_string(model.dim()));
    }
    return rescale(x, model.weights);
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const Dataset& train) {
    return fit(spec, train, RescaleWeights::identity(train.dim()));
}

TrainedModel fit(const ClassifierSpec& spec, const Dataset& train,
                 const RescaleWeights& weights) {
    spec.validate();
    switch (spec.kind) {
        case ClassifierKind::NMC: {
            const GroupedData grouped = group_by_class(train, weights, 1);
            NmcState state;
            for (const auto& rows : grouped.values) {
                state.centroids.push_back(class_mean(rows));
            }
            return TrainedModel{spec, grouped.labels, train.feature_names, weights,
                                std::move(state)};
        }
        case ClassifierKind::QNMC: {
            const GroupedData grouped = group_by_class(train, weights, 1);
            QnmcState state;
            for (std::size_t c = 0; c < grouped.values.size(); ++c) {
                SymMatrix sum(train.dim() + 1);
                for (const auto& row : grouped.values[c]) {
                    FeatureVector fv;
                    fv.values = row;
                    sum = sum + encode(fv, *spec.encoder).matrix();
                }
                state.centroids.emplace_back(
                    sum.scaled(1.0 / static_cast<double>(grouped.values[c].size())));
            }
            return TrainedModel{spec, grouped.labels, train.feature_names, weights,
                                std::move(state)};
        }
        case ClassifierKind::LDA: {
            const GroupedData grouped = group_by_class(train, weights, 2);
            const std::size_t d = train.dim();
            const std::size_t n_classes = grouped.labels.size();
            std::vector<std::vector<double>> means;
            std::vector<double> priors;
            SymMatrix pooled(d);
            for (std::size_t c = 0; c < n_classes; ++c) {
                const auto& rows = grouped.values[c];
                means.push_back(class_mean(rows));
                priors.push_back(static_cast<double>(rows.size()) /
                                 static_cast<double>(grouped.total));
                const SymMatrix cov = sample_covariance(rows, means.back());
                const double share = static_cast<double>(rows.size() - 1) /
                                     static_cast<double>(grouped.total - n_classes);
                pooled = pooled + cov.scaled(share);
            }
            return TrainedModel{
                spec, grouped.labels, train.feature_names, weights,
                finalize_lda(std::move(means), std::move(priors),
                             regularize(pooled, spec.regularization))};
        }
        case ClassifierKind::QDA: {
            const GroupedData grouped = group_by_class(train, weights, 2);
            std::vector<std::vector<double>> means;
            std::vector<double> priors;
            std::vector<SymMatrix> covs;
            for (const auto& rows : grouped.values) {
                means.push_back(class_mean(rows));
                priors.push_back(static_cast<double>(rows.size()) /
                                 static_cast<double>(grouped.total));
                covs.push_back(
                    regularize(sample_covariance(rows, means.back()), spec.regularization));
            }
            return TrainedModel{spec, grouped.labels, train.feature_names, weights,
                                finalize_qda(std::move(means), std::move(priors),
                                             std::move(covs))};
        }
    }
    throw ConfigError("fit: unknown classifier kind");
}

std::string predict(const TrainedModel& model, const FeatureVector& x) {
    const FeatureVector input = prepare_input(model, x);

    if (const auto* nmc = std::get_if<NmcState>(&model.state)) {
        std::size_t best = 0;
        double best_dist = 0.0;
        for (std::size_t c = 0; c < nmc->centroids.size(); ++c) {
            double dist = 0.0;
            for (std::size_t i = 0; i < input.values.size(); ++i) {
                const double diff = input.values[i] - nmc->centroids[c][i];
                dist += diff * diff;
            }
            if (c == 0 || dist < best_dist) {
                best = c;
                best_dist = dist;
            }
        }
        return model.labels[best];
    }
    if (const auto* qnmc_state = std::get_if<QnmcState>(&model.state)) {
        const DensityMatrix rho = encode(input, *model.spec.encoder);
        std::size_t best = 0;
        double best_dist = 0.0;
        for (std::size_t c = 0; c < qnmc_state->centroids.size(); ++c) {
            const double dist = trace_distance(rho, qnmc_state->centroids[c]);
            if (c == 0 || dist < best_dist) {
                best = c;
                best_dist = dist;
            }
        }
        return model.labels[best];
    }
    if (const auto* lda = std::get_if<LdaState>(&model.state)) {
        std::size_t best = 0;
        double best_score = 0.0;
        for (std::size_t c = 0; c < lda->means.size(); ++c) {
            const double score = dot(input.values, lda->linear[c]) + lda->bias[c];
            if (c == 0 || score > best_score) {
                best = c;
                best_score = score;
            }
        }
        return model.labels[best];
    }
    const auto& qda = std::get<QdaState>(model.state);
    std::size_t best = 0;
    double best_score = 0.0;
    std::vector<double> centered(input.values.size());
    for (std::size_t c = 0; c < qda.means.size(); ++c) {
        for (std::size_t i = 0; i < centered.size(); ++i) {
            centered[i] = input.values[i] - qda.means[c][i];
        }
        const double quad = dot(centered, mat_vec(qda.inverses[c], centered));
        const double score = -0.5 * qda.log_dets[c] - 0.5 * quad + std::log(qda.priors[c]);
        if (c == 0 || score > best_score) {
            best = c;
            best_score = score;
        }
    }
    return model.labels[best];
}

std::vector<std::string> predict_all(const TrainedModel& model, const Dataset& test) {
    std::vector<std::string> out;
    out.reserve(test.size());
    for (const auto& p : test.patterns) {
        out.push_back(predict(model, p));
    }
    return out;
}

TrainedModel fit_nmc(const Dataset& train) {
    ClassifierSpec spec;
    spec.kind = ClassifierKind::NMC;
    return fit(spec, train);
}

std::string predict_nmc(const TrainedModel& model, const FeatureVector& x) {
    if (model.spec.kind != ClassifierKind::NMC) {
        throw ConfigError("predict_nmc: model is not an nmc model");
    }
    return predict(model, x);
}

TrainedModel fit_qnmc(const Dataset& train, EncoderKind encoder,
                      const RescaleWeights& weights) {
    ClassifierSpec spec;
    spec.kind = ClassifierKind::QNMC;
    spec.encoder = encoder;
    return fit(spec, train, weights);
}

std::string predict_qnmc(const TrainedModel& model, const FeatureVector& x) {
    if (model.spec.kind != ClassifierKind::QNMC) {
        throw ConfigError("predict_qnmc: model is not a qnmc model");
    }
    return predict(model, x);
}

TrainedModel fit_lda(const Dataset& train, double reg) {
    ClassifierSpec spec;
    spec.kind = ClassifierKind::LDA;
    spec.regularization = reg;
    return fit(spec, train);
}

std::string predict_lda(const TrainedModel& model, const FeatureVector& x) {
    if (model.spec.kind != ClassifierKind::LDA) {
        throw ConfigError("predict_lda: model is not an lda model");
    }
    return predict(model, x);
}

TrainedModel fit_qda(const Dataset& train, double reg) {
    ClassifierSpec spec;
    spec.kind = ClassifierKind::QDA;
    spec.regularization = reg;
    return fit(spec, train);
}

std::string predict_qda(const TrainedModel& model, const FeatureVector& x) {
    if (model.spec.kind != ClassifierKind::QDA) {
        throw ConfigError("predict_qda: model is not a qda model");
    }
    return predict(model, x);
}

// --- persistence -----------------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_to_json(const SymMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

SymMatrix matrix_from_json(const json& rows) {
    std::vector<std::vector<double>> values;
    for (const auto& row : rows) {
        values.push_back(row.get<std::vector<double>>());
    }
    return SymMatrix::from_rows(values);
}

constexpr int kModelSchemaVersion = 1;

}  // namespace

std::string model_to_json(const TrainedModel& model) {
    json doc;
    doc["format"] = "qnmc-model";
    doc["schema_version"] = kModelSchemaVersion;
    json spec;
    spec["kind"] = to_string(model.spec.kind);
    if (model.spec.encoder) {
        spec["encoder"] = to_string(*model.spec.encoder);
    }
    spec["regularization"] = model.spec.regularization;
    if (!model.spec.name.empty()) {
        spec["name"] = model.spec.name;
    }
    doc["spec"] = std::move(spec);
    doc["labels"] = model.labels;
    doc["feature_names"] = model.feature_names;
    doc["weights"] = model.weights.values();

    json state;
    if (const auto* nmc = std::get_if<NmcState>(&model.state)) {
        state["centroids"] = nmc->centroids;
    } else if (const auto* q = std::get_if<QnmcState>(&model.state)) {
        json centroids = json::array();
        for (const auto& rho : q->centroids) {
            centroids.push_back(matrix_to_json(rho.matrix()));
        }
        state["quantum_centroids"] = std::move(centroids);
    } else if (const auto* lda = std::get_if<LdaState>(&model.state)) {
        state["means"] = lda->means;
        state["priors"] = lda->priors;
        state["covariance"] = matrix_to_json(lda->covariance);
    } else {
        const auto& qda = std::get<QdaState>(model.state);
        state["means"] = qda.means;
        state["priors"] = qda.priors;
        json covs = json::array();
        for (const auto& cov : qda.covariances) {
            covs.push_back(matrix_to_json(cov));
        }
        state["covariances"] = std::move(covs);
    }
    doc["state"] = std::move(state);
    return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "qnmc-model") {
            throw DataError("model: not a qnmc-model document");
        }
        if (doc.at("schema_version").get<int>() != kModelSchemaVersion) {
            throw DataError("model: unsupported schema_version");
        }
        ClassifierSpec spec;
        spec.kind = classifier_kind_from_string(doc.at("spec").at("kind").get<std::string>());
        if (doc.at("spec").contains("encoder")) {
            spec.encoder =
                encoder_kind_from_string(doc.at("spec").at("encoder").get<std::string>());
        }
        spec.regularization = doc.at("spec").at("regularization").get<double>();
        if (doc.at("spec").contains("name")) {
            spec.name = doc.at("spec").at("name").get<std::string>();
        }
        spec.validate();

        const auto labels = doc.at("labels").get<std::vector<std::string>>();
        const auto feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        RescaleWeights weights(doc.at("weights").get<std::vector<double>>());
        const json& state = doc.at("state");

        switch (spec.kind) {
            case ClassifierKind::NMC: {
                NmcState nmc;
                nmc.centroids =
                    state.at("centroids").get<std::vector<std::vector<double>>>();
                return TrainedModel{spec, labels, feature_names, weights, std::move(nmc)};
            }
            case ClassifierKind::QNMC: {
                QnmcState q;
                for (const auto& rows : state.at("quantum_centroids")) {
                    q.centroids.emplace_back(matrix_from_json(rows));
                }
                return TrainedModel{spec, labels, feature_names, weights, std::move(q)};
            }
            case ClassifierKind::LDA: {
                return TrainedModel{
                    spec, labels, feature_names, weights,
                    finalize_lda(state.at("means").get<std::vector<std::vector<double>>>(),
                                 state.at("priors").get<std::vector<double>>(),
                                 matrix_from_json(state.at("covariance")))};
            }
            case ClassifierKind::QDA: {
                std::vector<SymMatrix> covs;
                for (const auto& rows : state.at("covariances")) {
                    covs.push_back(matrix_from_json(rows));
                }
                return TrainedModel{
                    spec, labels, feature_names, weights,
                    finalize_qda(state.at("means").get<std::vector<std::vector<double>>>(),
                                 state.at("priors").get<std::vector<double>>(),
                                 std::move(covs))};
            }
        }
        throw DataError("model: unknown classifier kind");
    } catch (const json::exception& e) {
        throw DataError(std::string("model: malformed document: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    out << model_to_json(model);
    if (!out) {
        throw DataError("error while writing '" + path + "'");
    }
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

}  // namespace qnmc
