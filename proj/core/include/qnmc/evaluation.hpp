#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnmc/classifiers.hpp"
#include "qnmc/dataset.hpp"

namespace qnmc {

/// Where an experiment's data comes from: a delimited file, an
/// IPF-schema file, or one of the seeded generators.
struct DatasetSpec {
    enum class Kind { Csv, Ipf, Gaussian, Moon, Banana };
    Kind kind = Kind::Gaussian;

    // file-backed sources
    std::string path;
    std::string schema_path;  // ipf
    std::string label_column = "label";
    std::vector<std::string> feature_columns;
    char delimiter = ',';

    // generators (defaults: 200 patterns for gaussian/moon, 5300 for banana)
    std::uint64_t seed = 1;
    std::size_t n_per_class = 100;
    double noise_sigma = 0.1;  // moon 0.1, banana 0.2 (set when parsing config)
    double curvature = 0.5;    // banana
    std::vector<std::vector<double>> means;      // gaussian; empty = paper-like default
    std::vector<std::vector<double>> cov_diags;  // gaussian diagonal covariances
};

std::string to_string(DatasetSpec::Kind kind);
DatasetSpec::Kind dataset_kind_from_string(const std::string& name);

Dataset materialize(const DatasetSpec& spec);

/// Optional rescaling request attached to an experiment. Resolved
/// against the materialized dataset into one weight vector that is
/// applied identically to training and test patterns of every run.
struct RescaleSpec {
    enum class Mode { None, Uniform, PerFeature, Preset };
    Mode mode = Mode::None;
    double uniform_factor = 1.0;
    std::vector<double> weights;
    std::string preset_name;
};

RescaleWeights resolve_rescale(const RescaleSpec& spec, const Dataset& data);

struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<ClassifierSpec> classifiers;
    std::size_t runs = 100;
    std::uint64_t master_seed = 0;
    double train_fraction = 0.8;
    bool stratified = true;
    RescaleSpec rescale;
};

/// Fully resolved config (defaults included) as a JSON document; echoed
/// into every report for audit.
std::string config_to_json(const ExperimentConfig& cfg);

struct ClassifierResult {
    std::string name;
    ClassifierSpec spec;
    std::vector<double> run_accuracies;  // by run index
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample standard deviation (n-1)
    double mean_error = 0.0;    // 1 - mean_accuracy
    double std_error = 0.0;
    /// Mean over runs of per-class accuracy (supplementary output).
    std::vector<std::pair<std::string, double>> per_class_accuracy;
};

struct EvaluationReport {
    std::uint64_t master_seed = 0;
    std::size_t runs = 0;
    std::vector<std::uint64_t> run_seeds;
    std::string config_echo;  // JSON text
    std::vector<ClassifierResult> classifiers;
};

/// Correctly-classified fraction. Throws on empty or mismatched lists.
double accuracy(const std::vector<std::string>& predicted,
                const std::vector<std::string>& actual);

/// The experiment engine: for each run, derive the run seed, split,
/// fit every classifier on the train half (with the resolved rescaling
/// weights) and score on the test half. Any per-run failure aborts the
/// whole experiment with the run index and cause; runs are never
/// silently skipped. Deterministic given the master seed.
EvaluationReport run_experiment(const ExperimentConfig& cfg);
/// Same, with the dataset already materialized.
EvaluationReport run_experiment(const ExperimentConfig& cfg, const Dataset& data);

struct SweepRow {
    double t = 1.0;
    std::string classifier;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    std::size_t runs = 0;
};

/// Uniform-rescaling sweep: for every factor t in the grid, runs the
/// experiment with all-t weights and matched per-run seeds (the same
/// split sequence at every t, so rows are comparable and the t=1 rows
/// reproduce the unswept experiment). The config must contain a QNMC
/// classifier; an NMC reference is added when absent.
std::vector<SweepRow> rescale_sweep(const ExperimentConfig& cfg,
                                    const std::vector<double>& t_grid,
                                    std::size_t runs_per_t);

/// Named per-feature rescaling configuration.
struct RescalePreset {
    std::string name;
    std::vector<std::pair<std::string, double>> feature_weights;
};

/// The four canned IPF presets (Resc1..Resc4).
const std::vector<RescalePreset>& ipf_presets();
const RescalePreset& preset_by_name(const std::string& name);

/// Weight vector with the preset's weights at the named features and
/// 1.0 elsewhere. Feature names must match exactly (case-sensitive).
RescaleWeights apply_preset(const Dataset& data, const RescalePreset& preset);

/// The canned benchmark grid over an IPF-schema dataset: QNMC (SE),
/// QNMC (IE), QNMC (IE) with Resc 1..4, NMC, LDA and QDA, all evaluated
/// on the same split sequence.
EvaluationReport ipf_benchmark(const Dataset& data, std::size_t runs,
                               std::uint64_t master_seed, double train_fraction = 0.8,
                               bool stratified = true,
                               const std::string& source_description = "");

// --- report output -----------------------------------------------------------

/// Versioned machine-readable report (JSON, byte-deterministic).
std::string report_to_json(const EvaluationReport& report);
/// Aligned human-readable table, "mean +/- std" with three decimals.
std::string report_to_table(const EvaluationReport& report);

/// Sweep rows as delimited text suitable for external plotting.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_table(const std::vector<SweepRow>& rows);

}  // namespace qnmc
