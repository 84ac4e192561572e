#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qnmc/dataset.hpp"
#include "qnmc/matrix.hpp"
#include "qnmc/rng.hpp"

/// Absolute-tolerance comparison; the vendored doctest has no
/// Approx::margin, and most expected values here sit near zero where
/// relative epsilons are useless.
#define CHECK_CLOSE(actual, expected, tol) \
    CHECK(std::abs((actual) - (expected)) <= (tol))
#define REQUIRE_CLOSE(actual, expected, tol) \
    REQUIRE(std::abs((actual) - (expected)) <= (tol))

namespace qnmc::test {

/// Closed-form eigenvalues of [[a, b], [b, c]], ascending. Independent
/// oracle for the Jacobi path.
inline std::pair<double, double> eigen2x2(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mean - r, mean + r};
}

inline SymMatrix random_symmetric(std::size_t dim, Rng& rng, double scale = 1.0) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            m.set(i, j, scale * rng.normal());
        }
    }
    return m;
}

inline std::vector<double> random_unit_vector(std::size_t dim, Rng& rng) {
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            norm_sq += x * x;
        }
    } while (norm_sq < 1e-12);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& x : v) {
        x *= inv;
    }
    return v;
}

inline DensityMatrix random_pure_state(std::size_t dim, Rng& rng) {
    return DensityMatrix::pure(random_unit_vector(dim, rng));
}

/// Random mixed state: convex combination of `rank` random pure states.
inline DensityMatrix random_density_matrix(std::size_t dim, Rng& rng) {
    const std::size_t rank = 1 + rng.index(dim);
    std::vector<double> w(rank);
    double total = 0.0;
    for (auto& x : w) {
        x = rng.uniform_open();
        total += x;
    }
    SymMatrix sum(dim);
    for (std::size_t k = 0; k < rank; ++k) {
        sum = sum + outer_product(random_unit_vector(dim, rng)).scaled(w[k] / total);
    }
    return DensityMatrix(sum);
}

/// Frobenius distance between V diag(lambda) V^T and m.
inline double reconstruction_error(const SymMatrix& m, const EigenResult& eig) {
    const std::size_t n = m.dim();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += eig.eigenvalues[k] * eig.eigenvectors[k][i] * eig.eigenvectors[k][j];
            }
            const double d = s - m(i, j);
            err += d * d;
        }
    }
    return std::sqrt(err);
}

/// Frobenius distance between V^T V and the identity.
inline double orthogonality_error(const EigenResult& eig) {
    const std::size_t n = eig.eigenvalues.size();
    double err = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += eig.eigenvectors[a][i] * eig.eigenvectors[b][i];
            }
            const double d = s - (a == b ? 1.0 : 0.0);
            err += d * d;
        }
    }
    return std::sqrt(err);
}

/// Scratch directory cleaned up on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("qnmc_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Simple labeled dataset literal for classifier tests.
inline Dataset make_dataset(const std::vector<std::pair<std::vector<double>, std::string>>&
                                rows,
                            std::vector<std::string> feature_names = {}) {
    std::vector<FeatureVector> patterns;
    for (const auto& [values, label] : rows) {
        FeatureVector fv;
        fv.values = values;
        fv.label = label;
        patterns.push_back(std::move(fv));
    }
    if (feature_names.empty()) {
        for (std::size_t i = 0; i < rows.front().first.size(); ++i) {
            feature_names.push_back("x" + std::to_string(i + 1));
        }
    }
    return build_dataset(std::move(patterns), std::move(feature_names));
}

}  // namespace qnmc::test
