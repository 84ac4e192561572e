#include "qnmc/evaluation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "qnmc/error.hpp"
#include "qnmc/format.hpp"
#include "qnmc/rng.hpp"

namespace qnmc {

using nlohmann::json;

std::string to_string(DatasetSpec::Kind kind) {
    switch (kind) {
        case DatasetSpec::Kind::Csv: return "csv";
        case DatasetSpec::Kind::Ipf: return "ipf";
        case DatasetSpec::Kind::Gaussian: return "gaussian";
        case DatasetSpec::Kind::Moon: return "moon";
        case DatasetSpec::Kind::Banana: return "banana";
    }
    return "csv";
}

DatasetSpec::Kind dataset_kind_from_string(const std::string& name) {
    if (name == "csv") return DatasetSpec::Kind::Csv;
    if (name == "ipf") return DatasetSpec::Kind::Ipf;
    if (name == "gaussian") return DatasetSpec::Kind::Gaussian;
    if (name == "moon") return DatasetSpec::Kind::Moon;
    if (name == "banana") return DatasetSpec::Kind::Banana;
    throw ConfigError("unknown dataset kind '" + name +
                      "' (expected csv, ipf, gaussian, moon or banana)");
}

Dataset materialize(const DatasetSpec& spec) {
    switch (spec.kind) {
        case DatasetSpec::Kind::Csv:
            return load_csv(spec.path, spec.label_column, spec.feature_columns,
                            spec.delimiter);
        case DatasetSpec::Kind::Ipf:
            return load_ipf(spec.path, load_ipf_schema(spec.schema_path), spec.delimiter);
        case DatasetSpec::Kind::Gaussian: {
            if (spec.means.empty()) {
                return gen_gaussian_default(spec.n_per_class, spec.seed);
            }
            if (spec.means.size() != spec.cov_diags.size()) {
                throw ConfigError("gaussian dataset: need one cov_diag row per mean");
            }
            std::vector<SymMatrix> covs;
            for (const auto& diag : spec.cov_diags) {
                SymMatrix cov(diag.size());
                for (std::size_t i = 0; i < diag.size(); ++i) {
                    cov.set(i, i, diag[i]);
                }
                covs.push_back(std::move(cov));
            }
            return gen_gaussian(spec.n_per_class, spec.means, covs, spec.seed);
        }
        case DatasetSpec::Kind::Moon:
            return gen_moon(spec.n_per_class, spec.noise_sigma, spec.seed);
        case DatasetSpec::Kind::Banana:
            return gen_banana(spec.n_per_class, spec.curvature, spec.noise_sigma,
                              spec.seed);
    }
    throw ConfigError("unknown dataset kind");
}

RescaleWeights resolve_rescale(const RescaleSpec& spec, const Dataset& data) {
    switch (spec.mode) {
        case RescaleSpec::Mode::None:
            return RescaleWeights::identity(data.dim());
        case RescaleSpec::Mode::Uniform:
            return RescaleWeights::uniform(data.dim(), spec.uniform_factor);
        case RescaleSpec::Mode::PerFeature: {
            if (spec.weights.size() != data.dim()) {
                throw ConfigError("rescale: " + std::to_string(spec.weights.size()) +
                                  " weights for " + std::to_string(data.dim()) +
                                  " features");
            }
            return RescaleWeights(spec.weights);
        }
        case RescaleSpec::Mode::Preset:
            return apply_preset(data, preset_by_name(spec.preset_name));
    }
    return RescaleWeights::identity(data.dim());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json dataset;
    dataset["kind"] = to_string(cfg.dataset.kind);
    switch (cfg.dataset.kind) {
        case DatasetSpec::Kind::Csv:
            dataset["path"] = cfg.dataset.path;
            dataset["label_column"] = cfg.dataset.label_column;
            dataset["feature_columns"] = cfg.dataset.feature_columns;
            dataset["delimiter"] = std::string(1, cfg.dataset.delimiter);
            break;
        case DatasetSpec::Kind::Ipf:
            dataset["path"] = cfg.dataset.path;
            dataset["schema"] = cfg.dataset.schema_path;
            dataset["delimiter"] = std::string(1, cfg.dataset.delimiter);
            break;
        case DatasetSpec::Kind::Gaussian:
            dataset["seed"] = cfg.dataset.seed;
            dataset["n_per_class"] = cfg.dataset.n_per_class;
            if (cfg.dataset.means.empty()) {
                dataset["means"] = json::array({{0.0, 0.0}, {0.0, 0.0}});
                dataset["cov_diags"] = json::array({{1.0, 0.1}, {0.1, 1.0}});
            } else {
                dataset["means"] = cfg.dataset.means;
                dataset["cov_diags"] = cfg.dataset.cov_diags;
            }
            break;
        case DatasetSpec::Kind::Moon:
            dataset["seed"] = cfg.dataset.seed;
            dataset["n_per_class"] = cfg.dataset.n_per_class;
            dataset["noise_sigma"] = cfg.dataset.noise_sigma;
            break;
        case DatasetSpec::Kind::Banana:
            dataset["seed"] = cfg.dataset.seed;
            dataset["n_per_class"] = cfg.dataset.n_per_class;
            dataset["noise_sigma"] = cfg.dataset.noise_sigma;
            dataset["curvature"] = cfg.dataset.curvature;
            break;
    }

    json rescale;
    switch (cfg.rescale.mode) {
        case RescaleSpec::Mode::None:
            rescale["mode"] = "none";
            break;
        case RescaleSpec::Mode::Uniform:
            rescale["mode"] = "uniform";
            rescale["factor"] = cfg.rescale.uniform_factor;
            break;
        case RescaleSpec::Mode::PerFeature:
            rescale["mode"] = "per-feature";
            rescale["weights"] = cfg.rescale.weights;
            break;
        case RescaleSpec::Mode::Preset:
            rescale["mode"] = "preset";
            rescale["preset"] = cfg.rescale.preset_name;
            break;
    }

    json classifiers = json::array();
    for (const auto& spec : cfg.classifiers) {
        json c;
        c["kind"] = to_string(spec.kind);
        c["name"] = spec.display_name();
        if (spec.encoder) {
            c["encoder"] = to_string(*spec.encoder);
        }
        if (spec.kind == ClassifierKind::LDA || spec.kind == ClassifierKind::QDA) {
            c["regularization"] = spec.regularization;
        }
        classifiers.push_back(std::move(c));
    }

    json doc;
    doc["dataset"] = std::move(dataset);
    doc["classifiers"] = std::move(classifiers);
    doc["runs"] = cfg.runs;
    doc["master_seed"] = cfg.master_seed;
    doc["train_fraction"] = cfg.train_fraction;
    doc["stratified"] = cfg.stratified;
    doc["rescale"] = std::move(rescale);
    return doc.dump();
}

double accuracy(const std::vector<std::string>& predicted,
                const std::vector<std::string>& actual) {
    if (predicted.empty() || predicted.size() != actual.size()) {
        throw Error("accuracy: need two equally sized non-empty label lists");
    }
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == actual[i]) {
            ++matches;
        }
    }
    return static_cast<double>(matches) / static_cast<double>(predicted.size());
}

namespace {

/// Mean and sample standard deviation (n-1 denominator; 0 for n == 1).
std::pair<double, double> mean_and_std(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace

EvaluationReport run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, materialize(cfg.dataset));
}

EvaluationReport run_experiment(const ExperimentConfig& cfg, const Dataset& data) {
    if (cfg.runs == 0) {
        throw ConfigError("experiment: runs must be >= 1");
    }
    if (cfg.classifiers.empty()) {
        throw ConfigError("experiment: need at least one classifier");
    }
    for (const auto& spec : cfg.classifiers) {
        spec.validate();
    }
    const RescaleWeights weights = resolve_rescale(cfg.rescale, data);

    EvaluationReport report;
    report.master_seed = cfg.master_seed;
    report.runs = cfg.runs;
    report.config_echo = config_to_json(cfg);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        report.run_seeds.push_back(derive_run_seed(cfg.master_seed, r));
    }

    const std::size_t n_classifiers = cfg.classifiers.size();
    std::vector<std::vector<double>> accuracies(n_classifiers);
    // Per classifier, per class: sum of per-run class accuracies and the
    // number of runs in which the class appeared in the test half.
    std::vector<std::vector<double>> class_acc_sum(
        n_classifiers, std::vector<double>(data.label_set.size(), 0.0));
    std::vector<std::vector<std::size_t>> class_acc_runs(
        n_classifiers, std::vector<std::size_t>(data.label_set.size(), 0));

    for (std::size_t r = 0; r < cfg.runs; ++r) {
        SplitSpec split_spec;
        split_spec.train_fraction = cfg.train_fraction;
        split_spec.stratified = cfg.stratified;
        split_spec.seed = report.run_seeds[r];
        try {
            const auto [train, test] = split(data, split_spec);
            std::vector<std::string> actual;
            actual.reserve(test.size());
            for (const auto& p : test.patterns) {
                actual.push_back(*p.label);
            }
            for (std::size_t c = 0; c < n_classifiers; ++c) {
                const TrainedModel model = fit(cfg.classifiers[c], train, weights);
                const std::vector<std::string> predicted = predict_all(model, test);
                accuracies[c].push_back(accuracy(predicted, actual));
                for (std::size_t k = 0; k < data.label_set.size(); ++k) {
                    std::size_t total = 0;
                    std::size_t correct = 0;
                    for (std::size_t i = 0; i < actual.size(); ++i) {
                        if (actual[i] == data.label_set[k]) {
                            ++total;
                            correct += predicted[i] == actual[i] ? 1 : 0;
                        }
                    }
                    if (total > 0) {
                        class_acc_sum[c][k] +=
                            static_cast<double>(correct) / static_cast<double>(total);
                        ++class_acc_runs[c][k];
                    }
                }
            }
        } catch (const Error& e) {
            throw Error("experiment failed at run " + std::to_string(r) + " (seed " +
                        std::to_string(report.run_seeds[r]) + "): " + e.what());
        }
    }

    for (std::size_t c = 0; c < n_classifiers; ++c) {
        ClassifierResult result;
        result.name = cfg.classifiers[c].display_name();
        result.spec = cfg.classifiers[c];
        result.run_accuracies = std::move(accuracies[c]);
        const auto [mean, sd] = mean_and_std(result.run_accuracies);
        result.mean_accuracy = mean;
        result.std_accuracy = sd;
        result.mean_error = 1.0 - mean;
        result.std_error = sd;
        for (std::size_t k = 0; k < data.label_set.size(); ++k) {
            if (class_acc_runs[c][k] > 0) {
                result.per_class_accuracy.emplace_back(
                    data.label_set[k],
                    class_acc_sum[c][k] / static_cast<double>(class_acc_runs[c][k]));
            }
        }
        report.classifiers.push_back(std::move(result));
    }
    return report;
}

std::vector<SweepRow> rescale_sweep(const ExperimentConfig& cfg,
                                    const std::vector<double>& t_grid,
                                    std::size_t runs_per_t) {
    if (t_grid.empty()) {
        throw ConfigError("sweep: empty rescaling grid");
    }
    if (runs_per_t == 0) {
        throw ConfigError("sweep: runs_per_t must be >= 1");
    }
    const bool has_qnmc =
        std::any_of(cfg.classifiers.begin(), cfg.classifiers.end(), [](const auto& s) {
            return s.kind == ClassifierKind::QNMC;
        });
    if (!has_qnmc) {
        throw ConfigError("sweep: config must contain a qnmc classifier");
    }

    ExperimentConfig swept = cfg;
    swept.runs = runs_per_t;
    const bool has_nmc =
        std::any_of(swept.classifiers.begin(), swept.classifiers.end(), [](const auto& s) {
            return s.kind == ClassifierKind::NMC;
        });
    if (!has_nmc) {
        // Flat reference line for the plots.
        ClassifierSpec nmc;
        nmc.kind = ClassifierKind::NMC;
        swept.classifiers.push_back(nmc);
    }

    const Dataset data = materialize(cfg.dataset);
    std::vector<SweepRow> rows;
    for (double t : t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw ConfigError("sweep: rescaling factors must be finite and > 0");
        }
        swept.rescale.mode = RescaleSpec::Mode::Uniform;
        swept.rescale.uniform_factor = t;
        const EvaluationReport report = run_experiment(swept, data);
        for (const auto& result : report.classifiers) {
            SweepRow row;
            row.t = t;
            row.classifier = result.name;
            row.mean_accuracy = result.mean_accuracy;
            row.std_accuracy = result.std_accuracy;
            row.runs = runs_per_t;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

const std::vector<RescalePreset>& ipf_presets() {
    static const std::vector<RescalePreset> presets = {
        {"Resc1",
         {{"Follow Up Time (days)", 0.1}, {"Oxygen saturation %", 0.1}, {"Heart rate", 0.1}}},
        {"Resc2",
         {{"Follow Up Time (days)", 10.0},
          {"Oxygen saturation %", 10.0},
          {"Heart rate", 10.0}}},
        {"Resc3",
         {{"Follow Up Time (days)", 20.0},
          {"Oxygen saturation %", 20.0},
          {"Heart rate", 20.0}}},
        {"Resc4",
         {{"HRCT Pattern", 600.0},
          {"Smoking", 600.0},
          {"Smoking Status", 600.0},
          {"Sex", 10.0},
          {"Oxygen saturation %", 10.0}}},
    };
    return presets;
}

const RescalePreset& preset_by_name(const std::string& name) {
    for (const auto& preset : ipf_presets()) {
        if (preset.name == name) {
            return preset;
        }
    }
    throw ConfigError("unknown rescale preset '" + name + "' (expected Resc1..Resc4)");
}

RescaleWeights apply_preset(const Dataset& data, const RescalePreset& preset) {
    std::vector<double> weights(data.dim(), 1.0);
    for (const auto& [feature, weight] : preset.feature_weights) {
        weights[data.feature_index(feature)] = weight;
    }
    return RescaleWeights(std::move(weights));
}

EvaluationReport ipf_benchmark(const Dataset& data, std::size_t runs,
                               std::uint64_t master_seed, double train_fraction,
                               bool stratified, const std::string& source_description) {
    ExperimentConfig base;
    base.runs = runs;
    base.master_seed = master_seed;
    base.train_fraction = train_fraction;
    base.stratified = stratified;

    const auto make_spec = [](ClassifierKind kind, std::optional<EncoderKind> encoder,
                              const std::string& name) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.encoder = encoder;
        spec.name = name;
        return spec;
    };

    // Unrescaled rows share one experiment; every Resc row is its own
    // experiment with the same master seed, so all nine rows see the
    // identical split sequence.
    ExperimentConfig plain = base;
    plain.classifiers = {
        make_spec(ClassifierKind::QNMC, EncoderKind::SE, "QNMC (SE)"),
        make_spec(ClassifierKind::QNMC, EncoderKind::IE, "QNMC (IE)"),
        make_spec(ClassifierKind::NMC, std::nullopt, "NMC"),
        make_spec(ClassifierKind::LDA, std::nullopt, "LDA"),
        make_spec(ClassifierKind::QDA, std::nullopt, "QDA"),
    };
    const EvaluationReport plain_report = run_experiment(plain, data);

    std::vector<ClassifierResult> resc_rows;
    for (std::size_t k = 1; k <= 4; ++k) {
        ExperimentConfig resc = base;
        resc.rescale.mode = RescaleSpec::Mode::Preset;
        resc.rescale.preset_name = "Resc" + std::to_string(k);
        resc.classifiers = {make_spec(ClassifierKind::QNMC, EncoderKind::IE,
                                      "QNMC (IE) Resc " + std::to_string(k))};
        EvaluationReport r = run_experiment(resc, data);
        resc_rows.push_back(std::move(r.classifiers.front()));
    }

    EvaluationReport report;
    report.master_seed = master_seed;
    report.runs = runs;
    report.run_seeds = plain_report.run_seeds;

    json echo;
    echo["mode"] = "ipf-bench";
    if (!source_description.empty()) {
        echo["source"] = source_description;
    }
    echo["runs"] = runs;
    echo["master_seed"] = master_seed;
    echo["train_fraction"] = train_fraction;
    echo["stratified"] = stratified;
    json rows = json::array();
    for (const auto& spec : plain.classifiers) {
        json row;
        row["name"] = spec.display_name();
        rows.push_back(std::move(row));
    }
    for (std::size_t k = 1; k <= 4; ++k) {
        json row;
        row["name"] = "QNMC (IE) Resc " + std::to_string(k);
        row["preset"] = "Resc" + std::to_string(k);
        row["weights"] =
            apply_preset(data, preset_by_name("Resc" + std::to_string(k))).values();
        rows.push_back(std::move(row));
    }
    echo["rows"] = std::move(rows);
    report.config_echo = echo.dump();

    // Paper-style row order.
    report.classifiers.push_back(plain_report.classifiers[0]);  // QNMC (SE)
    report.classifiers.push_back(plain_report.classifiers[1]);  // QNMC (IE)
    for (auto& row : resc_rows) {
        report.classifiers.push_back(std::move(row));
    }
    report.classifiers.push_back(plain_report.classifiers[2]);  // NMC
    report.classifiers.push_back(plain_report.classifiers[3]);  // LDA
    report.classifiers.push_back(plain_report.classifiers[4]);  // QDA
    return report;
}

// --- output ----------------------------------------------------------------------

namespace {

constexpr int kReportSchemaVersion = 1;

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Display width in code points (the table uses the multibyte +/- sign).
std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) {
            ++w;
        }
    }
    return w;
}

std::string pad_to(const std::string& s, std::size_t width) {
    std::string out = s;
    const std::size_t w = display_width(s);
    if (w < width) {
        out.append(width - w, ' ');
    }
    return out;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
    json doc;
    doc["format"] = "qnmc-report";
    doc["schema_version"] = kReportSchemaVersion;
    doc["master_seed"] = report.master_seed;
    doc["runs"] = report.runs;
    doc["run_seeds"] = report.run_seeds;
    doc["config"] = json::parse(report.config_echo);
    json classifiers = json::array();
    for (const auto& result : report.classifiers) {
        json c;
        c["name"] = result.name;
        c["kind"] = to_string(result.spec.kind);
        if (result.spec.encoder) {
            c["encoder"] = to_string(*result.spec.encoder);
        }
        if (result.spec.kind == ClassifierKind::LDA ||
            result.spec.kind == ClassifierKind::QDA) {
            c["regularization"] = result.spec.regularization;
        }
        c["mean_accuracy"] = result.mean_accuracy;
        c["std_accuracy"] = result.std_accuracy;
        c["mean_error"] = result.mean_error;
        c["std_error"] = result.std_error;
        json per_class;
        for (const auto& [label, acc] : result.per_class_accuracy) {
            per_class[label] = acc;
        }
        c["per_class_accuracy"] = std::move(per_class);
        c["run_accuracies"] = result.run_accuracies;
        classifiers.push_back(std::move(c));
    }
    doc["classifiers"] = std::move(classifiers);
    return doc.dump(2) + "\n";
}

std::string report_to_table(const EvaluationReport& report) {
    std::vector<std::array<std::string, 3>> cells;
    cells.push_back({"Classifier", "Accuracy", "Total Error"});
    for (const auto& result : report.classifiers) {
        cells.push_back({result.name,
                         fixed3(result.mean_accuracy) + " ± " + fixed3(result.std_accuracy),
                         fixed3(result.mean_error) + " ± " + fixed3(result.std_error)});
    }
    std::array<std::size_t, 3> widths = {0, 0, 0};
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < 3; ++i) {
            widths[i] = std::max(widths[i], display_width(row[i]));
        }
    }
    std::ostringstream out;
    out << "runs: " << report.runs << "   master seed: " << report.master_seed << "\n";
    for (std::size_t r = 0; r < cells.size(); ++r) {
        out << pad_to(cells[r][0], widths[0]) << "  " << pad_to(cells[r][1], widths[1])
            << "  " << cells[r][2] << "\n";
        if (r == 0) {
            out << std::string(widths[0], '-') << "  " << std::string(widths[1], '-') << "  "
                << std::string(widths[2], '-') << "\n";
        }
    }
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "t,classifier,mean_accuracy,std_accuracy,runs\n";
    for (const auto& row : rows) {
        out << format_double(row.t) << ',' << row.classifier << ','
            << format_double(row.mean_accuracy) << ',' << format_double(row.std_accuracy)
            << ',' << row.runs << '\n';
    }
    return out.str();
}

std::string sweep_to_table(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << pad_to("t", 10) << "  " << pad_to("classifier", 18) << "  accuracy\n";
    out << std::string(10, '-') << "  " << std::string(18, '-') << "  "
        << std::string(16, '-') << "\n";
    for (const auto& row : rows) {
        out << pad_to(format_double(row.t), 10) << "  " << pad_to(row.classifier, 18)
            << "  " << fixed3(row.mean_accuracy) << " ± " << fixed3(row.std_accuracy)
            << "\n";
    }
    return out.str();
}

}  // namespace qnmc
