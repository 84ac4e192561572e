// Acceptance suite: one self-contained check per shipping criterion,
// each printed as a single [PASS]/[FAIL] line. Exits nonzero if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qnmc/classifiers.hpp"
#include "qnmc/dataset.hpp"
#include "qnmc/encoding.hpp"
#include "qnmc/error.hpp"
#include "qnmc/evaluation.hpp"
#include "qnmc/rng.hpp"
#include "support/test_helpers.hpp"

using namespace qnmc;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw CheckFailure(message);
    }
}

void require_close(double actual, double expected, double tol, const std::string& what) {
    if (!(std::abs(actual - expected) <= tol)) {
        std::ostringstream os;
        os << what << ": got " << actual << ", expected " << expected << " within " << tol;
        throw CheckFailure(os.str());
    }
}

FeatureVector point(std::vector<double> values) {
    FeatureVector fv;
    fv.values = std::move(values);
    return fv;
}

// --- criterion 1: encoding correctness (exact) ------------------------------

std::string criterion_encoding() {
    const DensityMatrix se0 = encode(point({0}), EncoderKind::SE);
    const double se0_expected[2][2] = {{0, 0}, {0, 1}};
    const DensityMatrix se1 = encode(point({1}), EncoderKind::SE);
    const double se1_expected[2][2] = {{1, 0}, {0, 0}};
    const DensityMatrix ie1 = encode(point({1}), EncoderKind::IE);
    const double ie1_expected[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            require_close(se0.matrix()(i, j), se0_expected[i][j], 1e-12, "encode((0), SE)");
            require_close(se1.matrix()(i, j), se1_expected[i][j], 1e-12, "encode((1), SE)");
            require_close(ie1.matrix()(i, j), ie1_expected[i][j], 1e-12, "encode((1), IE)");
        }
    }
    const auto v = inverse_stereographic(point({1, 1}));
    require(v.size() == 3, "inverse_stereographic((1,1)) has 3 components");
    require_close(v[0], 2.0 / 3.0, 1e-12, "SP^-1((1,1))[0]");
    require_close(v[1], 2.0 / 3.0, 1e-12, "SP^-1((1,1))[1]");
    require_close(v[2], 1.0 / 3.0, 1e-12, "SP^-1((1,1))[2]");
    return "4 fixed encodings exact to 1e-12";
}

// --- criterion 2: trace-distance property suite ------------------------------

std::string criterion_trace_distance() {
    Rng rng(0xACCE55);
    const int triples = 10000;
    for (int iter = 0; iter < triples; ++iter) {
        const std::size_t dim = 2 + rng.index(15);  // 2..16
        const auto draw = [&]() {
            return rng.uniform() < 0.5 ? test::random_pure_state(dim, rng)
                                       : test::random_density_matrix(dim, rng);
        };
        const DensityMatrix rho = draw();
        const DensityMatrix sigma = draw();
        const DensityMatrix omega = draw();
        const double d_rs = trace_distance(rho, sigma);
        require(d_rs >= 0.0, "non-negativity");
        require(d_rs <= 1.0 + 1e-9, "range [0, 1 + 1e-9]");
        require(std::abs(d_rs - trace_distance(sigma, rho)) <= 1e-12, "symmetry");
        require(trace_distance(rho, omega) + trace_distance(omega, sigma) >= d_rs - 1e-9,
                "triangle inequality");
    }
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t dim = 2 + rng.index(15);
        const auto u = test::random_unit_vector(dim, rng);
        const auto v = test::random_unit_vector(dim, rng);
        double overlap = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            overlap += u[i] * v[i];
        }
        const double expected = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
        require_close(trace_distance(DensityMatrix::pure(u), DensityMatrix::pure(v)),
                      expected, 1e-8, "pure-state identity");
    }
    return "10000 triples: metric axioms + range; 1000 pure pairs vs analytic oracle";
}

// --- criterion 3: eigensolver oracle equivalence ------------------------------

std::string criterion_eigensolver() {
    Rng rng(0xE16E);
    for (int iter = 0; iter < 1000; ++iter) {
        const SymMatrix m = test::random_symmetric(2, rng, 5.0);
        const auto [lo, hi] = test::eigen2x2(m(0, 0), m(0, 1), m(1, 1));
        const EigenResult eig = sym_eigen(m);
        require_close(eig.eigenvalues[0], lo, 1e-10, "2x2 low eigenvalue");
        require_close(eig.eigenvalues[1], hi, 1e-10, "2x2 high eigenvalue");
    }
    for (std::size_t dim = 2; dim <= 32; ++dim) {
        for (int iter = 0; iter < 30; ++iter) {
            const SymMatrix m = test::random_symmetric(dim, rng);
            const EigenResult eig = sym_eigen(m);
            require(test::reconstruction_error(m, eig) < 1e-8,
                    "reconstruction at dim " + std::to_string(dim));
            require(test::orthogonality_error(eig) < 1e-8,
                    "orthogonality at dim " + std::to_string(dim));
        }
    }
    return "1000 closed-form 2x2 matches; reconstruction/orthogonality to dim 32";
}

// --- criterion 4: NMC rescaling argmin-invariance ------------------------------

std::string criterion_nmc_invariance() {
    Rng rng(0x4A11);
    int compared = 0;
    for (int ds = 0; ds < 20; ++ds) {
        SymMatrix cov_a(2), cov_b(2);
        cov_a.set(0, 0, 0.2 + 2.0 * rng.uniform());
        cov_a.set(1, 1, 0.2 + 2.0 * rng.uniform());
        cov_b.set(0, 0, 0.2 + 2.0 * rng.uniform());
        cov_b.set(1, 1, 0.2 + 2.0 * rng.uniform());
        const Dataset data = gen_gaussian(
            50,
            {{rng.normal(), rng.normal()}, {rng.normal() + 1.0, rng.normal()}},
            {cov_a, cov_b}, rng.next_u64());
        SplitSpec split_spec;
        split_spec.seed = rng.next_u64();
        const auto [train, test] = split(data, split_spec);
        ClassifierSpec nmc;
        nmc.kind = ClassifierKind::NMC;
        const auto baseline =
            predict_all(fit(nmc, train, RescaleWeights::identity(2)), test);
        for (double t : {0.01, 0.5, 2.0, 100.0}) {
            const auto scaled =
                predict_all(fit(nmc, train, RescaleWeights::uniform(2, t)), test);
            require(scaled == baseline,
                    "NMC labels changed at t=" + std::to_string(t) + " on dataset " +
                        std::to_string(ds));
            compared += static_cast<int>(scaled.size());
        }
    }
    return std::to_string(compared) + " per-pattern predictions identical across t";
}

// --- criterion 5: QNMC non-invariance witness ----------------------------------

std::string criterion_qnmc_witness() {
    const Dataset data = gen_gaussian_default(100, 1);  // the default config
    const std::vector<double> grid = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0};
    const std::size_t runs = 20;
    const std::uint64_t master = 42;
    ClassifierSpec q;
    q.kind = ClassifierKind::QNMC;
    q.encoder = EncoderKind::SE;

    // Matched seeds: the split sequence is identical at every t.
    std::vector<std::vector<std::string>> baseline(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        SplitSpec split_spec;
        split_spec.seed = derive_run_seed(master, r);
        const auto [train, test] = split(data, split_spec);
        baseline[r] = predict_all(fit(q, train, RescaleWeights::identity(2)), test);
    }
    for (double t : grid) {
        if (t == 1.0) {
            continue;
        }
        for (std::size_t r = 0; r < runs; ++r) {
            SplitSpec split_spec;
            split_spec.seed = derive_run_seed(master, r);
            const auto [train, test] = split(data, split_spec);
            const auto scaled = predict_all(fit(q, train, RescaleWeights::uniform(2, t)), test);
            if (scaled != baseline[r]) {
                std::ostringstream os;
                os << "predictions differ at t=" << t << " (run " << r << ")";
                return os.str();
            }
        }
    }
    throw CheckFailure("QNMC(SE) predictions identical across the whole sweep grid");
}

// --- criterion 6: Table-1-style ordering on the default generators --------------

std::string criterion_ordering() {
    std::ostringstream detail;
    for (const auto kind :
         {DatasetSpec::Kind::Moon, DatasetSpec::Kind::Gaussian, DatasetSpec::Kind::Banana}) {
        ExperimentConfig cfg;
        cfg.dataset.kind = kind;
        cfg.dataset.seed = 1;
        if (kind == DatasetSpec::Kind::Moon) {
            cfg.dataset.n_per_class = 100;
            cfg.dataset.noise_sigma = 0.1;
        } else if (kind == DatasetSpec::Kind::Gaussian) {
            cfg.dataset.n_per_class = 100;
        } else {
            cfg.dataset.n_per_class = 2650;
            cfg.dataset.noise_sigma = 0.2;
            cfg.dataset.curvature = 0.5;
        }
        cfg.runs = 100;
        cfg.master_seed = 42;
        ClassifierSpec nmc;
        nmc.kind = ClassifierKind::NMC;
        ClassifierSpec q;
        q.kind = ClassifierKind::QNMC;
        q.encoder = EncoderKind::SE;
        cfg.classifiers = {nmc, q};

        const EvaluationReport report = run_experiment(cfg);
        const auto& n = report.classifiers[0];
        const auto& qr = report.classifiers[1];
        const double se = std::sqrt(n.std_accuracy * n.std_accuracy / 100.0 +
                                    qr.std_accuracy * qr.std_accuracy / 100.0);
        const double diff = qr.mean_accuracy - n.mean_accuracy;
        std::ostringstream os;
        os << to_string(kind) << ": QNMC(SE) " << qr.mean_accuracy << " vs NMC "
           << n.mean_accuracy << " (diff " << diff << ", 2se " << 2.0 * se << ")";
        require(diff >= 2.0 * se, "ordering not significant on " + os.str());
        detail << (detail.tellp() > 0 ? "; " : "") << to_string(kind) << " +"
               << static_cast<int>(diff * 1000) / 10.0 << "pp";
    }
    return detail.str();
}

// --- criterion 7: ipf-bench grid (conditional on the real dataset) --------------

std::string criterion_ipf_grid() {
    const char* real_csv = std::getenv("QNMC_IPF_CSV");
    const char* real_schema = std::getenv("QNMC_IPF_SCHEMA");
    std::string csv_path;
    std::string schema_path;
    bool real_data = false;
    if (real_csv && real_schema) {
        csv_path = real_csv;
        schema_path = real_schema;
        real_data = true;
    } else {
        const char* dir = std::getenv("QNMC_DATA_DIR");
        require(dir != nullptr, "QNMC_DATA_DIR not set");
        csv_path = std::string(dir) + "/ipf_synthetic.csv";
        schema_path = std::string(dir) + "/ipf_schema.txt";
    }

    const Dataset data = load_ipf(csv_path, load_ipf_schema(schema_path));
    require(data.size() == 126, "126 patterns");
    require(data.dim() == 12, "12 block-2 features");
    require(data.label_set.size() == 3, "3 stage classes");

    const EvaluationReport report = ipf_benchmark(data, 50, 0, 0.8, true, csv_path);
    const std::vector<std::string> rows = {
        "QNMC (SE)",        "QNMC (IE)",        "QNMC (IE) Resc 1",
        "QNMC (IE) Resc 2", "QNMC (IE) Resc 3", "QNMC (IE) Resc 4",
        "NMC",              "LDA",              "QDA"};
    require(report.classifiers.size() == rows.size(), "9-row grid");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = report.classifiers[i];
        require(r.name == rows[i], "row order: " + rows[i]);
        require(r.run_accuracies.size() == 50, "50 runs per row");
        require(r.mean_error >= 0.0 && r.mean_error <= 1.0, "error in [0,1]");
        require(std::abs(r.mean_error - (1.0 - r.mean_accuracy)) <= 1e-12,
                "error/accuracy consistency");
    }

    if (!real_data) {
        return "synthetic 126x12 fixture: full 9-row pipeline + property checks "
               "(value targets need the original dataset; set QNMC_IPF_CSV/QNMC_IPF_SCHEMA)";
    }

    // Published mean total errors, +-0.05 absolute.
    const std::vector<std::pair<std::string, double>> expected = {
        {"QNMC (SE)", 0.455},        {"QNMC (IE)", 0.378},
        {"QNMC (IE) Resc 1", 0.334}, {"QNMC (IE) Resc 2", 0.341},
        {"QNMC (IE) Resc 3", 0.344}, {"QNMC (IE) Resc 4", 0.314},
        {"NMC", 0.495},              {"LDA", 0.393},
        {"QDA", 0.568}};
    for (const auto& [name, target] : expected) {
        for (const auto& r : report.classifiers) {
            if (r.name == name) {
                require_close(r.mean_error, target, 0.05, name + " mean total error");
            }
        }
    }
    return "original dataset: all 9 mean total errors within +-0.05 of the published grid";
}

// --- criterion 8: classifier reduction checks -----------------------------------

std::string criterion_reduction() {
    // Cross-shaped classes: exactly isotropic, exactly equal sample
    // covariances (class B is a translated copy of class A).
    std::vector<std::pair<std::vector<double>, std::string>> rows;
    const auto add_cross = [&rows](double cx, double cy, const std::string& label) {
        rows.push_back({{cx + 1.0, cy}, label});
        rows.push_back({{cx - 1.0, cy}, label});
        rows.push_back({{cx, cy + 1.0}, label});
        rows.push_back({{cx, cy - 1.0}, label});
    };
    add_cross(0.0, 0.0, "A");
    add_cross(2.0, 1.0, "B");
    const Dataset data = test::make_dataset(rows);

    const TrainedModel nmc = fit_nmc(data);
    const TrainedModel lda = fit_lda(data);
    const TrainedModel qda = fit_qda(data);

    Rng rng(0x8ED0);
    int checked = 0;
    while (checked < 100) {
        const FeatureVector x = point({rng.uniform(-3, 5), rng.uniform(-3, 4)});
        // Signed distance to the NMC boundary (bisector of the two means).
        const double margin = 2.0 * x.values[0] + 1.0 * x.values[1] - 2.5;
        if (std::abs(margin) < 1e-6) {
            continue;  // tie tolerance: skip boundary points
        }
        const std::string from_nmc = predict_nmc(nmc, x);
        require(predict_lda(lda, x) == from_nmc, "LDA == NMC off the boundary");
        require(predict_qda(qda, x) == from_nmc, "QDA == NMC off the boundary");
        ++checked;
    }
    return "100 random points: LDA, QDA and NMC agree everywhere off the boundary";
}

// --- criterion 9: end-to-end determinism through the CLI ------------------------

std::string criterion_cli_determinism() {
    const char* cli = std::getenv("QNMC_CLI");
    require(cli != nullptr, "QNMC_CLI not set");
    test::TempDir tmp("acceptance_cli");
    test::write_text(tmp.file("exp.ini"),
                     "[dataset]\n"
                     "kind = gaussian\n"
                     "seed = 1\n"
                     "n_per_class = 60\n"
                     "[experiment]\n"
                     "runs = 10\n"
                     "seed = 4242\n"
                     "[classifier]\n"
                     "kind = nmc\n"
                     "[classifier]\n"
                     "kind = qnmc\n"
                     "encoder = se\n"
                     "[classifier]\n"
                     "kind = lda\n");
    for (const char* out : {"r1", "r2"}) {
        const std::string command = "cd '" + tmp.path().string() + "' && '" +
                                    std::string(cli) + "' evaluate -c exp.ini -o " + out +
                                    " --format json > /dev/null 2>&1";
        require(std::system(command.c_str()) == 0, "cmd_evaluate exited 0");
    }
    const std::string r1 = test::read_text(tmp.file("r1.json"));
    const std::string r2 = test::read_text(tmp.file("r2.json"));
    require(!r1.empty(), "report written");
    require(r1 == r2, "byte-identical machine-readable reports");
    return "two cmd_evaluate invocations produced byte-identical reports (" +
           std::to_string(r1.size()) + " bytes)";
}

struct Criterion {
    int number;
    std::string name;
    std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "encoding correctness (exact)", criterion_encoding},
        {2, "trace-distance property suite", criterion_trace_distance},
        {3, "eigensolver oracle equivalence", criterion_eigensolver},
        {4, "NMC rescaling argmin-invariance", criterion_nmc_invariance},
        {5, "QNMC non-invariance witness", criterion_qnmc_witness},
        {6, "QNMC(SE) > NMC ordering on default generators", criterion_ordering},
        {7, "ipf-bench 9-row grid (conditional values)", criterion_ipf_grid},
        {8, "LDA/QDA/NMC reduction agreement", criterion_reduction},
        {9, "end-to-end CLI determinism", criterion_cli_determinism},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::atoi(argv[i]));
    }

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.number) ==
                selected.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            const std::string detail = criterion.run();
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            std::cout << "[PASS] criterion " << criterion.number << ": " << criterion.name
                      << " — " << detail << " (" << ms << " ms)\n";
        } catch (const std::exception& e) {
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            std::cout << "[FAIL] criterion " << criterion.number << ": " << criterion.name
                      << " — " << e.what() << " (" << ms << " ms)\n";
            ++failures;
        }
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
