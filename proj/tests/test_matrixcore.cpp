#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qnmc/error.hpp"
#include "qnmc/matrix.hpp"
#include "qnmc/rng.hpp"
#include "support/test_helpers.hpp"

using namespace qnmc;
using test::eigen2x2;

TEST_CASE("SymMatrix symmetrizes near-symmetric input and rejects real asymmetry") {
    // Drift below 1e-12 * max|entry| is absorbed as (A + A^T)/2.
    const SymMatrix m = SymMatrix::from_rows({{2.0, 1.0 + 1e-14}, {1.0, 3.0}});
    CHECK(m(0, 1) == m(1, 0));
    CHECK(m(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(SymMatrix::from_rows({{2.0, 1.0}, {1.1, 3.0}}), NumericError);
    CHECK_THROWS_AS(SymMatrix::from_rows({{1.0, 2.0}, {2.0}}), NumericError);
    CHECK_THROWS_AS(SymMatrix::from_rows({}), NumericError);
}

TEST_CASE("sym_eigen on fixed 2x2 cases") {
    SUBCASE("identity") {
        const EigenResult eig = sym_eigen(SymMatrix::identity(2));
        CHECK(eig.eigenvalues[0] == 1.0);
        CHECK(eig.eigenvalues[1] == 1.0);
        // Tied eigenvalues keep original diagonal order: V stays I.
        CHECK(eig.eigenvectors[0][0] == 1.0);
        CHECK(eig.eigenvectors[1][1] == 1.0);
    }
    SUBCASE("already diagonal") {
        SymMatrix m(2);
        m.set(1, 1, 1.0);
        const EigenResult eig = sym_eigen(m);
        CHECK(eig.eigenvalues[0] == 0.0);
        CHECK(eig.eigenvalues[1] == 1.0);
    }
    SUBCASE("off-diagonal flip") {
        // Characteristic polynomial x^2 - tr x + det = x^2 - 1: roots -1, 1.
        SymMatrix m(2);
        m.set(0, 1, 1.0);
        const EigenResult eig = sym_eigen(m);
        CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sym_eigen matches the closed-form 2x2 oracle on 1000 random matrices") {
    Rng rng(101);
    for (int iter = 0; iter < 1000; ++iter) {
        const SymMatrix m = test::random_symmetric(2, rng, 3.0);
        const auto [lo, hi] = eigen2x2(m(0, 0), m(0, 1), m(1, 1));
        const EigenResult eig = sym_eigen(m);
        CHECK_CLOSE(eig.eigenvalues[0], lo, 1e-10);
        CHECK_CLOSE(eig.eigenvalues[1], hi, 1e-10);
    }
}

TEST_CASE("sym_eigen reconstruction and orthogonality up to dim 32") {
    Rng rng(202);
    int checked = 0;
    for (std::size_t dim : {1, 2, 3, 5, 8, 13, 21, 32}) {
        for (int iter = 0; iter < 125; ++iter) {
            const SymMatrix m = test::random_symmetric(dim, rng);
            const EigenResult eig = sym_eigen(m);
            CHECK(test::reconstruction_error(m, eig) < 1e-8);
            CHECK(test::orthogonality_error(eig) < 1e-8);
            for (std::size_t k = 1; k < dim; ++k) {
                CHECK(eig.eigenvalues[k - 1] <= eig.eigenvalues[k]);
            }
            ++checked;
        }
    }
    CHECK(checked == 1000);
}

TEST_CASE("sym_eigen is deterministic for identical input") {
    Rng rng(303);
    const SymMatrix m = test::random_symmetric(7, rng);
    const EigenResult a = sym_eigen(m);
    const EigenResult b = sym_eigen(m);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("psd_check") {
    SymMatrix diag(2);
    diag.set(0, 0, 1.0);
    CHECK(psd_check(diag, 1e-9));

    SymMatrix neg(2);
    neg.set(0, 0, 1.0);
    neg.set(1, 1, -0.5);
    CHECK_FALSE(psd_check(neg, 1e-9));

    // Eigenvalues {0, 1} by the closed-form oracle.
    const SymMatrix half = SymMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
    const auto [lo, hi] = eigen2x2(0.5, 0.5, 0.5);
    CHECK_CLOSE(lo, 0.0, 1e-15);
    CHECK_CLOSE(hi, 1.0, 1e-15);
    CHECK(psd_check(half, 1e-9));

    CHECK_THROWS_AS(psd_check(diag, -1.0), NumericError);
}

TEST_CASE("DensityMatrix validates trace and positivity") {
    SymMatrix not_unit(2);
    not_unit.set(0, 0, 0.5);
    CHECK_THROWS_AS(DensityMatrix{not_unit}, NumericError);

    SymMatrix indefinite(2);
    indefinite.set(0, 0, 1.5);
    indefinite.set(1, 1, -0.5);
    CHECK_THROWS_AS(DensityMatrix{indefinite}, NumericError);

    CHECK_THROWS_AS(DensityMatrix::pure({0.5, 0.5}), NumericError);
    const DensityMatrix rho = DensityMatrix::pure({1.0, 0.0});
    CHECK(rho.matrix()(0, 0) == 1.0);
}

TEST_CASE("trace_distance fixed cases") {
    const DensityMatrix e0 = DensityMatrix::pure({1.0, 0.0});
    const DensityMatrix e1 = DensityMatrix::pure({0.0, 1.0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const DensityMatrix diag45 = DensityMatrix::pure({inv_sqrt2, inv_sqrt2});

    CHECK(trace_distance(e0, e0) == 0.0);
    CHECK(trace_distance(e0, e1) == doctest::Approx(1.0).epsilon(1e-12));
    // Difference [[0.5, -0.5], [-0.5, -0.5]] has eigenvalues +-sqrt(1/2)
    // by the 2x2 oracle, so the distance is sqrt(1/2); the pure-state
    // identity sqrt(1 - overlap^2) = sqrt(1 - 1/2) agrees.
    CHECK(trace_distance(e0, diag45) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

    const DensityMatrix big = DensityMatrix::pure({1.0, 0.0, 0.0});
    CHECK_THROWS_AS(trace_distance(e0, big), NumericError);
}

TEST_CASE("trace_distance metric axioms on random density matrices") {
    Rng rng(404);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t dim = 2 + rng.index(7);
        const DensityMatrix rho = test::random_density_matrix(dim, rng);
        const DensityMatrix sigma = test::random_density_matrix(dim, rng);
        const DensityMatrix omega = test::random_density_matrix(dim, rng);
        const double ab = trace_distance(rho, sigma);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-9);
        CHECK(std::abs(ab - trace_distance(sigma, rho)) <= 1e-12);
        CHECK(trace_distance(rho, omega) + trace_distance(omega, sigma) >= ab - 1e-9);
    }
}

TEST_CASE("trace_distance between pure states equals sqrt(1 - overlap^2)") {
    Rng rng(505);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t dim = 2 + rng.index(7);
        const auto u = test::random_unit_vector(dim, rng);
        const auto v = test::random_unit_vector(dim, rng);
        double overlap = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            overlap += u[i] * v[i];
        }
        const double expected = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
        const double got = trace_distance(DensityMatrix::pure(u), DensityMatrix::pure(v));
        CHECK_CLOSE(got, expected, 1e-8);
    }
}

TEST_CASE("matrix arithmetic keeps symmetry and trace linear") {
    Rng rng(606);
    const SymMatrix a = test::random_symmetric(5, rng);
    const SymMatrix b = test::random_symmetric(5, rng);
    const SymMatrix sum = a + b;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(sum(i, j) == sum(j, i));
        }
    }
    CHECK(sum.trace() == doctest::Approx(a.trace() + b.trace()).epsilon(1e-12));
    CHECK(a.scaled(2.0).trace() == doctest::Approx(2.0 * a.trace()).epsilon(1e-12));
}
