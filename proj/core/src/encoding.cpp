#include "qnmc/encoding.hpp"

#include <cmath>
#include <string>

#include "qnmc/error.hpp"

namespace qnmc {

RescaleWeights::RescaleWeights(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ConfigError("RescaleWeights: weight vector is empty");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
            throw ConfigError("RescaleWeights: weight " + std::to_string(i) +
                              " must be finite and > 0, got " + std::to_string(weights_[i]));
        }
    }
}

RescaleWeights RescaleWeights::uniform(std::size_t dim, double t) {
    return RescaleWeights(std::vector<double>(dim, t));
}

RescaleWeights RescaleWeights::identity(std::size_t dim) {
    return uniform(dim, 1.0);
}

std::string to_string(EncoderKind kind) {
    return kind == EncoderKind::SE ? "SE" : "IE";
}

EncoderKind encoder_kind_from_string(const std::string& name) {
    if (name == "SE" || name == "se") {
        return EncoderKind::SE;
    }
    if (name == "IE" || name == "ie") {
        return EncoderKind::IE;
    }
    throw ConfigError("unknown encoder '" + name + "' (expected 'se' or 'ie')");
}

FeatureVector rescale(const FeatureVector& x, const RescaleWeights& w) {
    if (w.dim() != x.dim()) {
        throw EncodingError("rescale: weight vector has " + std::to_string(w.dim()) +
                            " entries but pattern has " + std::to_string(x.dim()));
    }
    FeatureVector out;
    out.values.resize(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        out.values[i] = w[i] * x.values[i];
    }
    out.label = x.label;
    return out;
}

namespace {

void require_finite(const FeatureVector& x, const char* op) {
    if (x.dim() == 0) {
        throw EncodingError(std::string(op) + ": empty pattern");
    }
    for (double v : x.values) {
        if (!std::isfinite(v)) {
            throw EncodingError(std::string(op) + ": non-finite component in input");
        }
    }
}

/// Euclidean norm computed against the largest magnitude so the
/// intermediate sum of squares cannot overflow.
double scaled_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    if (m == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (double v : x) {
        const double y = v / m;
        s += y * y;
    }
    return m * std::sqrt(s);
}

}  // namespace

std::vector<double> inverse_stereographic(const FeatureVector& x) {
    require_finite(x, "inverse_stereographic");
    const std::size_t d = x.dim();
    std::vector<double> out(d + 1);

    double s = 0.0;
    for (double v : x.values) {
        s += v * v;
    }
    if (std::isfinite(s)) {
        const double factor = 1.0 / (s + 1.0);
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = 2.0 * x.values[i] * factor;
        }
        out[d] = (s - 1.0) * factor;
        return out;
    }

    // |x|^2 overflowed; evaluate with components scaled by max|x_i|.
    double m = 0.0;
    for (double v : x.values) {
        m = std::max(m, std::abs(v));
    }
    double sy = 0.0;
    for (double v : x.values) {
        const double y = v / m;
        sy += y * y;
    }
    const double inv_m_sq = 1.0 / (m * m);  // may underflow to 0: exact limit
    const double denom = sy + inv_m_sq;
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = 2.0 * (x.values[i] / m) / (m * denom);
    }
    out[d] = (sy - inv_m_sq) / denom;
    return out;
}

std::vector<double> stereographic_project(const std::vector<double>& unit_vector) {
    if (unit_vector.size() < 2) {
        throw EncodingError("stereographic_project: need at least 2 components");
    }
    const std::size_t d = unit_vector.size() - 1;
    const double denom = 1.0 - unit_vector[d];
    if (std::abs(denom) < 1e-12) {
        throw EncodingError("stereographic_project: input at the projection pole");
    }
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = unit_vector[i] / denom;
    }
    return out;
}

std::vector<double> informative_embed(const FeatureVector& x) {
    require_finite(x, "informative_embed");
    const double nrm = scaled_norm(x.values);
    if (nrm == 0.0) {
        throw EncodingError("informative_embed: zero-norm input has no defined encoding");
    }
    const std::size_t d = x.dim();
    const double h = std::hypot(nrm, 1.0);  // sqrt(|x|^2 + 1), overflow-safe
    std::vector<double> out(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = (x.values[i] / nrm) / h;
    }
    out[d] = nrm / h;
    return out;
}

DensityMatrix encode(const FeatureVector& x, EncoderKind kind) {
    const std::vector<double> embedded =
        kind == EncoderKind::SE ? inverse_stereographic(x) : informative_embed(x);
    return DensityMatrix(outer_product(embedded));
}

}  // namespace qnmc
