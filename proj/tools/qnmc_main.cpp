// qnmc command-line front end: reproducible experiments over the
// classifier library, driven by sectioned key-value config files.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 dataset error,
// 4 runtime (encoding/fit/experiment) error.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnmc/classifiers.hpp"
#include "qnmc/config.hpp"
#include "qnmc/dataset.hpp"
#include "qnmc/encoding.hpp"
#include "qnmc/error.hpp"
#include "qnmc/evaluation.hpp"
#include "qnmc/format.hpp"

namespace {

using qnmc::format_double;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

/// Output paths resolve against --output-dir, then $QNMC_OUTPUT_DIR,
/// then the working directory. Absolute paths pass through.
std::string resolve_output(const std::string& name, const std::string& out_dir) {
    std::filesystem::path p(name);
    if (p.is_absolute()) {
        return name;
    }
    std::string dir = out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("QNMC_OUTPUT_DIR")) {
            dir = env;
        }
    }
    if (dir.empty()) {
        return name;
    }
    return (std::filesystem::path(dir) / p).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw qnmc::DataError("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw qnmc::DataError("error while writing '" + path + "'");
    }
}

std::vector<double> parse_weight_list(const std::string& text) {
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(normalized);
    std::vector<double> weights;
    std::string token;
    while (in >> token) {
        double v = 0.0;
        const char* first = token.data();
        const char* last = first + token.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw qnmc::ConfigError("--weights: cannot parse '" + token + "'");
        }
        weights.push_back(v);
    }
    if (weights.empty()) {
        throw qnmc::ConfigError("--weights: empty list");
    }
    return weights;
}

struct CommonOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::string output = "report";
    std::string output_dir;
    std::string format = "both";  // table | json | both
};

void apply_overrides(qnmc::ExperimentConfig& cfg, const CommonOverrides& o) {
    if (o.seed) {
        cfg.master_seed = *o.seed;
    }
    if (o.runs) {
        cfg.runs = *o.runs;
    }
}

void emit_report(const qnmc::EvaluationReport& report, const CommonOverrides& o) {
    const std::string table = qnmc::report_to_table(report);
    if (o.format == "table" || o.format == "both") {
        std::cout << table;
    }
    const std::string base = resolve_output(o.output, o.output_dir);
    if (o.format == "json" || o.format == "both") {
        write_file(base + ".json", qnmc::report_to_json(report));
        std::cout << "wrote " << base << ".json\n";
    }
    if (o.format == "table" || o.format == "both") {
        write_file(base + ".txt", table);
        std::cout << "wrote " << base << ".txt\n";
    }
}

int cmd_evaluate(const std::string& config_path, const CommonOverrides& overrides) {
    qnmc::ExperimentConfig cfg = qnmc::load_experiment_config(config_path);
    apply_overrides(cfg, overrides);
    const qnmc::EvaluationReport report = qnmc::run_experiment(cfg);
    emit_report(report, overrides);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_text,
              std::size_t runs_per_t, const CommonOverrides& overrides) {
    qnmc::ExperimentConfig cfg = qnmc::load_experiment_config(config_path);
    apply_overrides(cfg, overrides);
    const std::vector<double> grid = parse_weight_list(grid_text);
    const auto rows = qnmc::rescale_sweep(cfg, grid, runs_per_t);
    std::cout << qnmc::sweep_to_table(rows);
    const std::string base = resolve_output(overrides.output, overrides.output_dir);
    write_file(base + ".csv", qnmc::sweep_to_csv(rows));
    std::cout << "wrote " << base << ".csv\n";
    return kExitOk;
}

int cmd_ipf_bench(const std::string& data_path, const std::string& schema_path,
                  char delimiter, const CommonOverrides& overrides) {
    const qnmc::IpfSchema schema = qnmc::load_ipf_schema(schema_path);
    const qnmc::Dataset data = qnmc::load_ipf(data_path, schema, delimiter);
    const qnmc::EvaluationReport report =
        qnmc::ipf_benchmark(data, overrides.runs.value_or(50),
                            overrides.seed.value_or(0), 0.8, true, data_path);
    emit_report(report, overrides);
    return kExitOk;
}

/// Loads either a plain delimited file or, when a schema is given, an
/// IPF-schema file (block-2 features only).
qnmc::Dataset load_input(const std::string& path, const std::string& schema_path,
                         const std::string& label_column, char delimiter) {
    if (!schema_path.empty()) {
        return qnmc::load_ipf(path, qnmc::load_ipf_schema(schema_path), delimiter);
    }
    return qnmc::load_csv(path, label_column, {}, delimiter);
}

int cmd_encode(const std::string& input, const std::string& schema_path,
               const std::string& label_column, const std::string& encoder_name,
               const std::string& weights_text, double uniform, char delimiter,
               const std::string& output, const std::string& output_dir) {
    const qnmc::EncoderKind kind = qnmc::encoder_kind_from_string(encoder_name);
    const qnmc::Dataset data = load_input(input, schema_path, label_column, delimiter);

    if (!weights_text.empty() && uniform != 1.0) {
        throw qnmc::ConfigError("give at most one of --weights and --uniform");
    }
    qnmc::RescaleWeights weights = qnmc::RescaleWeights::identity(data.dim());
    if (!weights_text.empty()) {
        weights = qnmc::RescaleWeights(parse_weight_list(weights_text));
        if (weights.dim() != data.dim()) {
            throw qnmc::ConfigError("--weights: " + std::to_string(weights.dim()) +
                                    " weights for " + std::to_string(data.dim()) +
                                    " features");
        }
    } else if (uniform != 1.0) {
        weights = qnmc::RescaleWeights::uniform(data.dim(), uniform);
    }

    std::ostringstream out;
    out << "# qnmc density dump v1\n";
    out << "# encoder: " << qnmc::to_string(kind) << "\n";
    out << "# dim: " << data.dim() + 1 << "\n";
    out << "# patterns: " << data.size() << "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        try {
            const qnmc::DensityMatrix rho =
                qnmc::encode(qnmc::rescale(data.patterns[i], weights), kind);
            out << "pattern " << i << "\n";
            for (std::size_t r = 0; r < rho.dim(); ++r) {
                for (std::size_t c = 0; c < rho.dim(); ++c) {
                    if (c > 0) {
                        out << ' ';
                    }
                    out << format_double(rho.matrix()(r, c));
                }
                out << "\n";
            }
        } catch (const qnmc::Error& e) {
            throw qnmc::EncodingError("pattern " + std::to_string(i) + ": " + e.what());
        }
    }
    if (output.empty()) {
        std::cout << out.str();
    } else {
        const std::string path = resolve_output(output, output_dir);
        write_file(path, out.str());
        std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
}

int cmd_fit(const std::string& config_path, const std::string& output,
            const std::string& output_dir) {
    const qnmc::ExperimentConfig cfg = qnmc::load_experiment_config(config_path);
    if (cfg.classifiers.size() != 1) {
        throw qnmc::ConfigError("fit: config must contain exactly one [classifier]");
    }
    const qnmc::Dataset data = qnmc::materialize(cfg.dataset);
    const qnmc::RescaleWeights weights = qnmc::resolve_rescale(cfg.rescale, data);
    const qnmc::TrainedModel model = qnmc::fit(cfg.classifiers.front(), data, weights);
    const std::string path = resolve_output(output, output_dir);
    qnmc::save_model(model, path);
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& schema_path, const std::string& label_column,
                char delimiter, const std::string& output,
                const std::string& output_dir) {
    const qnmc::TrainedModel model = qnmc::load_model(model_path);
    const qnmc::Dataset data = load_input(data_path, schema_path, label_column, delimiter);
    const std::vector<std::string> predicted = qnmc::predict_all(model, data);

    std::ostringstream out;
    const bool has_actual = !data.label_set.empty();
    out << "index,predicted" << (has_actual ? ",actual" : "") << "\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        out << i << ',' << predicted[i];
        if (has_actual) {
            out << ',' << *data.patterns[i].label;
        }
        out << "\n";
    }
    if (output.empty()) {
        std::cout << out.str();
    } else {
        const std::string path = resolve_output(output, output_dir);
        write_file(path, out.str());
        std::cout << "wrote " << path << "\n";
    }
    if (has_actual) {
        std::vector<std::string> actual;
        actual.reserve(data.size());
        for (const auto& p : data.patterns) {
            actual.push_back(*p.label);
        }
        std::cout << "accuracy: " << format_double(qnmc::accuracy(predicted, actual))
                  << "\n";
    }
    return kExitOk;
}

int cmd_gen_data(const std::string& kind_name, std::size_t n_per_class,
                 double noise_sigma, double curvature, std::uint64_t seed,
                 const std::string& output, const std::string& output_dir) {
    qnmc::DatasetSpec spec;
    spec.kind = qnmc::dataset_kind_from_string(kind_name);
    if (spec.kind == qnmc::DatasetSpec::Kind::Csv ||
        spec.kind == qnmc::DatasetSpec::Kind::Ipf) {
        throw qnmc::ConfigError("gen-data: kind must be gaussian, moon or banana");
    }
    spec.seed = seed;
    spec.n_per_class = n_per_class;
    spec.noise_sigma = noise_sigma;
    spec.curvature = curvature;
    const qnmc::Dataset data = qnmc::materialize(spec);
    const std::string path = resolve_output(output, output_dir);
    qnmc::save_csv(data, path);
    std::cout << "wrote " << path << " (" << data.size() << " patterns)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum nearest-mean classification toolkit"};
    app.require_subcommand(1);

    CommonOverrides overrides;
    std::string config_path;
    std::string input_path;
    std::string schema_path;
    std::string model_path;
    std::string label_column = "label";
    std::string encoder_name;
    std::string weights_text;
    std::string grid_text = "0.05,0.1,0.25,0.5,1,2,4,10";
    std::string gen_kind;
    std::string file_output;
    std::string delimiter = ",";
    double uniform = 1.0;
    double noise_sigma = 0.1;
    double curvature = 0.5;
    std::size_t n_per_class = 100;
    std::size_t runs_per_t = 20;
    std::uint64_t gen_seed = 1;

    const auto add_report_options = [&](CLI::App* cmd) {
        cmd->add_option("--seed", overrides.seed, "master seed override");
        cmd->add_option("--runs", overrides.runs, "number of runs override");
        cmd->add_option("-o,--output", overrides.output,
                        "output base name (default 'report')");
        cmd->add_option("--output-dir", overrides.output_dir,
                        "output directory (default $QNMC_OUTPUT_DIR or '.')");
        cmd->add_option("--format", overrides.format, "table, json or both")
            ->check(CLI::IsMember({"table", "json", "both"}));
    };

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "run a repeated random-split experiment from a config file");
    evaluate->add_option("-c,--config", config_path, "experiment config file")
        ->required();
    add_report_options(evaluate);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "uniform rescaling-factor sweep for a QNMC experiment");
    sweep->add_option("-c,--config", config_path, "experiment config file")->required();
    sweep->add_option("--t-grid", grid_text, "comma-separated rescaling factors");
    sweep->add_option("--runs-per-t", runs_per_t, "experiments per grid point");
    sweep->add_option("--seed", overrides.seed, "master seed override");
    sweep->add_option("-o,--output", overrides.output, "output base name");
    sweep->add_option("--output-dir", overrides.output_dir, "output directory");

    CLI::App* ipf = app.add_subcommand(
        "ipf-bench", "canned 9-row benchmark grid over an IPF-schema dataset");
    ipf->add_option("--data", input_path, "IPF-schema delimited data file")->required();
    ipf->add_option("--schema", schema_path, "sidecar column-mapping file")->required();
    ipf->add_option("--delimiter", delimiter, "cell delimiter (default ',')");
    add_report_options(ipf);

    CLI::App* encode_cmd =
        app.add_subcommand("encode", "dump the density pattern of every input pattern");
    encode_cmd->add_option("-i,--input", input_path, "delimited data file")->required();
    encode_cmd->add_option("--schema", schema_path, "treat input as an IPF-schema file");
    encode_cmd->add_option("--label-column", label_column,
                           "label column name ('' = unlabeled data)");
    encode_cmd->add_option("-e,--encoder", encoder_name, "se or ie")->required();
    encode_cmd->add_option("--weights", weights_text, "per-feature rescaling weights");
    encode_cmd->add_option("--uniform", uniform, "uniform rescaling factor");
    encode_cmd->add_option("--delimiter", delimiter, "cell delimiter");
    encode_cmd->add_option("-o,--output", file_output, "output file (default stdout)");
    encode_cmd->add_option("--output-dir", overrides.output_dir, "output directory");

    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "fit one classifier on a full dataset and save the model");
    fit_cmd->add_option("-c,--config", config_path,
                        "config with [dataset] and one [classifier]")
        ->required();
    fit_cmd->add_option("-o,--output", file_output, "model file")->required();
    fit_cmd->add_option("--output-dir", overrides.output_dir, "output directory");

    CLI::App* predict_cmd =
        app.add_subcommand("predict", "classify a dataset with a saved model");
    predict_cmd->add_option("-m,--model", model_path, "model file")->required();
    predict_cmd->add_option("-d,--data", input_path, "delimited data file")->required();
    predict_cmd->add_option("--schema", schema_path, "treat input as an IPF-schema file");
    predict_cmd->add_option("--label-column", label_column,
                            "label column name ('' = unlabeled data)");
    predict_cmd->add_option("--delimiter", delimiter, "cell delimiter");
    predict_cmd->add_option("-o,--output", file_output,
                            "predictions file (default stdout)");
    predict_cmd->add_option("--output-dir", overrides.output_dir, "output directory");

    CLI::App* gen = app.add_subcommand("gen-data", "write a synthetic dataset file");
    gen->add_option("-k,--kind", gen_kind, "gaussian, moon or banana")->required();
    gen->add_option("--n-per-class", n_per_class, "patterns per class");
    gen->add_option("--noise", noise_sigma, "noise standard deviation");
    gen->add_option("--curvature", curvature, "banana arc curvature");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--output", file_output, "dataset file")->required();
    gen->add_option("--output-dir", overrides.output_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (delimiter.size() != 1) {
            throw qnmc::ConfigError("--delimiter must be one character");
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(config_path, overrides);
        }
        if (sweep->parsed()) {
            if (overrides.output == "report") {
                overrides.output = "sweep";
            }
            return cmd_sweep(config_path, grid_text, runs_per_t, overrides);
        }
        if (ipf->parsed()) {
            return cmd_ipf_bench(input_path, schema_path, delimiter[0], overrides);
        }
        if (encode_cmd->parsed()) {
            return cmd_encode(input_path, schema_path, label_column, encoder_name,
                              weights_text, uniform, delimiter[0], file_output,
                              overrides.output_dir);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(config_path, file_output, overrides.output_dir);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(model_path, input_path, schema_path, label_column,
                               delimiter[0], file_output, overrides.output_dir);
        }
        if (gen->parsed()) {
            return cmd_gen_data(gen_kind, n_per_class, noise_sigma, curvature, gen_seed,
                                file_output, overrides.output_dir);
        }
        throw qnmc::ConfigError("no subcommand given");
    } catch (const qnmc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qnmc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
