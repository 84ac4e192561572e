#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "qnmc/encoding.hpp"
#include "qnmc/error.hpp"
#include "qnmc/matrix.hpp"
#include "qnmc/rng.hpp"
#include "support/test_helpers.hpp"

using namespace qnmc;

namespace {

FeatureVector fv(std::vector<double> values) {
    FeatureVector x;
    x.values = std::move(values);
    return x;
}

double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("RescaleWeights validation") {
    CHECK_THROWS_AS(RescaleWeights({}), ConfigError);
    CHECK_THROWS_AS(RescaleWeights({1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(RescaleWeights({1.0, -2.0}), ConfigError);
    CHECK_THROWS_AS(RescaleWeights({1.0, std::numeric_limits<double>::infinity()}),
                    ConfigError);
    CHECK(RescaleWeights::uniform(3, 2.0).values() == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("rescale") {
    CHECK(rescale(fv({1, 2}), RescaleWeights({1, 1})).values == std::vector<double>{1, 2});
    CHECK(rescale(fv({1, 2}), RescaleWeights({10, 0.1})).values ==
          std::vector<double>{10, 0.2});
    CHECK(rescale(fv({3, 4}), RescaleWeights({2, 2})).values == std::vector<double>{6, 8});
    CHECK_THROWS_AS(rescale(fv({1, 2, 3}), RescaleWeights({1, 1})), EncodingError);

    FeatureVector labeled = fv({1});
    labeled.label = "A";
    CHECK(rescale(labeled, RescaleWeights({5})).label == "A");
}

TEST_CASE("inverse_stereographic fixed points") {
    CHECK(inverse_stereographic(fv({0})) == std::vector<double>{0.0, -1.0});
    CHECK(inverse_stereographic(fv({1})) == std::vector<double>{1.0, 0.0});

    // Exact rational evaluation of the map at (1,1): factor 1/3,
    // numerator (2, 2, 1).
    const auto v = inverse_stereographic(fv({1, 1}));
    REQUIRE(v.size() == 3);
    CHECK_CLOSE(v[0], 2.0 / 3.0, 1e-12);
    CHECK_CLOSE(v[1], 2.0 / 3.0, 1e-12);
    CHECK_CLOSE(v[2], 1.0 / 3.0, 1e-12);

    CHECK_THROWS_AS(inverse_stereographic(fv({std::nan(""), 1.0})), EncodingError);
    CHECK_THROWS_AS(inverse_stereographic(fv({})), EncodingError);
}

TEST_CASE("inverse_stereographic returns unit vectors, round-trips through SP") {
    Rng rng(11);
    for (int iter = 0; iter < 400; ++iter) {
        const std::size_t d = 1 + rng.index(34);
        std::vector<double> x(d);
        for (auto& c : x) {
            c = 4.0 * rng.normal();
        }
        const auto v = inverse_stereographic(fv(x));
        CHECK_CLOSE(norm_of(v), 1.0, 1e-12);

        const auto back = stereographic_project(v);
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("inverse_stereographic survives huge inputs") {
    const auto v = inverse_stereographic(fv({1e200, -1e200}));
    CHECK_CLOSE(norm_of(v), 1.0, 1e-12);
    CHECK_CLOSE(v[2], 1.0, 1e-12);
}

TEST_CASE("stereographic_project rejects the pole") {
    CHECK_THROWS_AS(stereographic_project({0.0, 0.0, 1.0}), EncodingError);
    CHECK_THROWS_AS(stereographic_project({1.0}), EncodingError);
}

TEST_CASE("informative_embed fixed points") {
    const auto v1 = informative_embed(fv({1}));
    REQUIRE(v1.size() == 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK_CLOSE(v1[0], inv_sqrt2, 1e-12);
    CHECK_CLOSE(v1[1], inv_sqrt2, 1e-12);

    // |x| = 5 exactly, so components are x_i/(5 sqrt(26)) and 5/sqrt(26).
    const auto v2 = informative_embed(fv({3, 4}));
    REQUIRE(v2.size() == 3);
    CHECK_CLOSE(v2[0], 3.0 / (5.0 * std::sqrt(26.0)), 1e-12);
    CHECK_CLOSE(v2[1], 4.0 / (5.0 * std::sqrt(26.0)), 1e-12);
    CHECK_CLOSE(v2[2], 5.0 / std::sqrt(26.0), 1e-12);

    CHECK_THROWS_AS(informative_embed(fv({0, 0})), EncodingError);
    CHECK_THROWS_AS(informative_embed(fv({std::nan("")})), EncodingError);
}

TEST_CASE("informative_embed preserves the input norm in the last component") {
    Rng rng(22);
    for (double target : {1e-6, 1e-3, 0.5, 1.0, 7.0, 1e3, 1e6}) {
        const std::size_t d = 1 + rng.index(10);
        auto dir = test::random_unit_vector(d, rng);
        for (auto& c : dir) {
            c *= target;
        }
        const auto v = informative_embed(fv(dir));
        CHECK_CLOSE(norm_of(v), 1.0, 1e-12);
        const double last = v.back();
        // The last component carries |x| exactly (to 1e-12); recovering
        // it through 1 - c^2 cancels catastrophically as c approaches 1,
        // so the recovery tolerance widens with |x|^2 * eps.
        CHECK_CLOSE(last, target / std::sqrt(target * target + 1.0), 1e-12);
        const double recovered = last / std::sqrt(1.0 - last * last);
        const double rel_tol = 1e-9 + 4.0 * 2.220446049250313e-16 * (1.0 + target * target);
        CHECK(std::abs(recovered - target) <= rel_tol * target);
    }
}

TEST_CASE("encode fixed density patterns") {
    const DensityMatrix se0 = encode(fv({0}), EncoderKind::SE);
    CHECK(se0.matrix()(0, 0) == 0.0);
    CHECK(se0.matrix()(0, 1) == 0.0);
    CHECK(se0.matrix()(1, 1) == 1.0);

    const DensityMatrix se1 = encode(fv({1}), EncoderKind::SE);
    CHECK(se1.matrix()(0, 0) == 1.0);
    CHECK(se1.matrix()(1, 1) == 0.0);

    const DensityMatrix ie1 = encode(fv({1}), EncoderKind::IE);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK_CLOSE(ie1.matrix()(i, j), 0.5, 1e-12);
        }
    }

    CHECK_THROWS_AS(encode(fv({0, 0}), EncoderKind::IE), EncodingError);
}

TEST_CASE("encoded states are pure, unit-trace and PSD for random inputs") {
    Rng rng(33);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t d = 1 + rng.index(34);
        std::vector<double> x(d);
        for (auto& c : x) {
            c = 3.0 * rng.normal();
        }
        for (EncoderKind kind : {EncoderKind::SE, EncoderKind::IE}) {
            if (kind == EncoderKind::IE && norm_of(x) <= 1e-12) {
                continue;
            }
            const DensityMatrix rho = encode(fv(x), kind);
            CHECK(rho.dim() == d + 1);
            CHECK(std::abs(rho.matrix().trace() - 1.0) <= 1e-12);
            CHECK(psd_check(rho.matrix(), 1e-9));
            // Purity: rho^2 == rho within 1e-9 in Frobenius norm.
            double err = 0.0;
            for (std::size_t i = 0; i <= d; ++i) {
                for (std::size_t j = 0; j <= d; ++j) {
                    double sq = 0.0;
                    for (std::size_t k = 0; k <= d; ++k) {
                        sq += rho.matrix()(i, k) * rho.matrix()(k, j);
                    }
                    const double diff = sq - rho.matrix()(i, j);
                    err += diff * diff;
                }
            }
            CHECK(std::sqrt(err) <= 1e-9);
        }
    }
}

TEST_CASE("trace distance between encoded patterns is not rescaling-invariant") {
    // Witness pair: x=(1), y=(2) with t=2 under SE.
    const double base = trace_distance(encode(fv({1}), EncoderKind::SE),
                                       encode(fv({2}), EncoderKind::SE));
    const double scaled = trace_distance(encode(fv({2}), EncoderKind::SE),
                                         encode(fv({4}), EncoderKind::SE));
    CHECK(std::abs(scaled - 2.0 * base) > 0.5);
    // Exact values from the pure-state identity: 3/5 and 36/85.
    CHECK(base == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(scaled == doctest::Approx(36.0 / 85.0).epsilon(1e-12));
}
