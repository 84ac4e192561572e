#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnmc/encoding.hpp"
#include "qnmc/matrix.hpp"

namespace qnmc {

/// Ordered collection of labeled patterns plus feature/label metadata.
/// label_set holds the distinct class identifiers in first-appearance
/// order; that order is the tie-breaking order used by every classifier.
struct Dataset {
    std::vector<FeatureVector> patterns;
    std::vector<std::string> feature_names;
    std::vector<std::string> label_set;
    std::string label_name = "label";

    std::size_t size() const { return patterns.size(); }
    std::size_t dim() const { return feature_names.size(); }

    /// Index of name in feature_names; throws DataError if absent.
    std::size_t feature_index(const std::string& name) const;
};

/// Assembles a Dataset, validating uniform dimension and finite values
/// and computing label_set in first-appearance order.
Dataset build_dataset(std::vector<FeatureVector> patterns,
                      std::vector<std::string> feature_names,
                      std::string label_name = "label");

/// Seeded train/test partition request. The two halves are always
/// disjoint and cover the input exactly.
struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/// Splits into (train, test). Stratified mode preserves per-class
/// proportions to within one pattern and guarantees at least one
/// pattern of every class in each half; it requires every class to
/// hold >= 2 patterns. Deterministic per seed.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

// --- delimited text I/O ----------------------------------------------------

/// Loads a delimited text file (first row = header). label_column may be
/// empty for unlabeled data. feature_columns empty means "all non-label
/// columns", otherwise selects and orders the feature matrix.
/// Cells must parse as finite numbers; failures are reported with the
/// file line and column name.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::vector<std::string>& feature_columns = {},
                 char delimiter = ',');

/// Writes a Dataset in the same delimited format load_csv reads.
/// Numbers are written with shortest round-trip precision, so
/// save + load reproduces the dataset exactly.
void save_csv(const Dataset& data, const std::string& path, char delimiter = ',');

// --- the IPF file schema ---------------------------------------------------

/// Column mapping for IPF-style exports: an id column, the block of
/// stage-determining features (loaded for validation but never part of
/// the feature matrix), the block of non-systematic features used for
/// classification, and the stage label column.
struct IpfSchema {
    std::string id_column;
    std::string label_column;
    std::vector<std::string> block1_columns;
    std::vector<std::string> block2_columns;
    std::vector<std::string> ignored_columns;
};

/// Parses the sidecar key-value mapping document (keys: id, label,
/// block1, block2, ignore; values: comma-separated column names).
IpfSchema load_ipf_schema(const std::string& path);

/// Loads an IPF-schema file: features are exactly the block2 columns in
/// schema order; block1 columns are required and checked numeric but
/// excluded from the feature matrix.
Dataset load_ipf(const std::string& csv_path, const IpfSchema& schema,
                 char delimiter = ',');

// --- synthetic dataset generators ------------------------------------------

/// Seeded multivariate normal sampler; one class per configured
/// mean/covariance pair, n_per_class patterns each.
Dataset gen_gaussian(std::size_t n_per_class,
                     const std::vector<std::vector<double>>& means,
                     const std::vector<SymMatrix>& covariances,
                     std::uint64_t seed);

/// Default two-class configuration: identical means (0,0), crossed
/// anisotropic covariances diag(1, 0.1) and diag(0.1, 1).
Dataset gen_gaussian_default(std::size_t n_per_class, std::uint64_t seed);

/// Two interleaved unit half-circles (the second one mirrored and
/// offset) with isotropic Gaussian noise.
Dataset gen_moon(std::size_t n_per_class, double noise_sigma, std::uint64_t seed);

/// Two opposing parabolic arcs y = +-(curvature * x^2 - 0.3) over
/// x in [-1.5, 1.5] with isotropic Gaussian noise.
Dataset gen_banana(std::size_t n_per_class, double curvature, double noise_sigma,
                   std::uint64_t seed);

}  // namespace qnmc
