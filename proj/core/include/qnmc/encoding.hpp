#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnmc/matrix.hpp"

namespace qnmc {

/// A d-dimensional real pattern, optionally labeled with its class.
struct FeatureVector {
    std::vector<double> values;
    std::optional<std::string> label;

    std::size_t dim() const { return values.size(); }
};

/// Per-feature positive multipliers applied to raw features before
/// encoding. A uniform rescaling factor t is the special case of all
/// entries equal to t.
class RescaleWeights {
  public:
    /// All entries must be finite and > 0.
    explicit RescaleWeights(std::vector<double> weights);

    /// d copies of the factor t.
    static RescaleWeights uniform(std::size_t dim, double t);
    static RescaleWeights identity(std::size_t dim);

    const std::vector<double>& values() const { return weights_; }
    std::size_t dim() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

    bool operator==(const RescaleWeights& other) const = default;

  private:
    std::vector<double> weights_;
};

enum class EncoderKind { SE, IE };

std::string to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& name);

/// Componentwise product w[i] * x[i]; label preserved.
FeatureVector rescale(const FeatureVector& x, const RescaleWeights& w);

/// Inverse stereographic projection of x onto the unit sphere in
/// R^{d+1}:
///   (1 / (|x|^2 + 1)) * [2 x^1, ..., 2 x^d, |x|^2 - 1].
/// The origin maps to the south pole (0, ..., 0, -1).
std::vector<double> inverse_stereographic(const FeatureVector& x);

/// Forward stereographic projection from the unit sphere in R^{d+1}
/// back to R^d; the left inverse of inverse_stereographic away from the
/// projection pole (last component = 1).
std::vector<double> stereographic_project(const std::vector<double>& unit_vector);

/// Norm-keeping embedding of x into the unit sphere in R^{d+1}:
///   (x^1 / (|x| sqrt(|x|^2+1)), ..., x^d / (|x| sqrt(|x|^2+1)),
///    |x| / sqrt(|x|^2+1)).
/// The last component preserves |x|, recoverable as c / sqrt(1 - c^2).
/// Undefined at the origin (the directional limit is path-dependent);
/// throws EncodingError there rather than fabricating a value.
std::vector<double> informative_embed(const FeatureVector& x);

/// Pure-state density matrix of x under the chosen embedding: the outer
/// product of the embedded unit vector with itself.
DensityMatrix encode(const FeatureVector& x, EncoderKind kind);

}  // namespace qnmc
