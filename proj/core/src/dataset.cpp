#include "qnmc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qnmc/error.hpp"
#include "qnmc/format.hpp"
#include "qnmc/rng.hpp"

namespace qnmc {

std::size_t Dataset::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) {
            return i;
        }
    }
    throw DataError("unknown feature '" + name + "'");
}

Dataset build_dataset(std::vector<FeatureVector> patterns,
                      std::vector<std::string> feature_names,
                      std::string label_name) {
    Dataset data;
    data.feature_names = std::move(feature_names);
    data.label_name = std::move(label_name);
    const std::size_t d = data.feature_names.size();
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (patterns[i].dim() != d) {
            throw DataError("pattern " + std::to_string(i) + " has " +
                            std::to_string(patterns[i].dim()) + " features, expected " +
                            std::to_string(d));
        }
        for (double v : patterns[i].values) {
            if (!std::isfinite(v)) {
                throw DataError("pattern " + std::to_string(i) + " contains a non-finite value");
            }
        }
        if (patterns[i].label &&
            std::find(data.label_set.begin(), data.label_set.end(), *patterns[i].label) ==
                data.label_set.end()) {
            data.label_set.push_back(*patterns[i].label);
        }
    }
    data.patterns = std::move(patterns);
    return data;
}

// --- splitting ---------------------------------------------------------------

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
    std::vector<FeatureVector> patterns;
    patterns.reserve(rows.size());
    for (std::size_t r : rows) {
        patterns.push_back(data.patterns[r]);
    }
    return build_dataset(std::move(patterns), data.feature_names, data.label_name);
}

std::size_t train_count(double fraction, std::size_t total) {
    auto n = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
    // Keep both halves non-empty.
    return std::clamp<std::size_t>(n, 1, total - 1);
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw ConfigError("split: train_fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    Rng rng(spec.seed);

    if (spec.stratified) {
        for (const auto& p : data.patterns) {
            if (!p.label) {
                throw DataError("split: stratified split requires labeled patterns");
            }
        }
        for (const std::string& label : data.label_set) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (*data.patterns[i].label == label) {
                    rows.push_back(i);
                }
            }
            if (rows.size() < 2) {
                throw DataError("split: class '" + label + "' has " +
                                std::to_string(rows.size()) +
                                " pattern(s); stratified splitting needs at least 2");
            }
            rng.shuffle(rows);
            const std::size_t n_train = train_count(spec.train_fraction, rows.size());
            train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + n_train);
            test_rows.insert(test_rows.end(), rows.begin() + n_train, rows.end());
        }
    } else {
        if (data.size() < 2) {
            throw DataError("split: need at least 2 patterns");
        }
        std::vector<std::size_t> rows(data.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i] = i;
        }
        rng.shuffle(rows);
        const std::size_t n_train = train_count(spec.train_fraction, rows.size());
        train_rows.assign(rows.begin(), rows.begin() + n_train);
        test_rows.assign(rows.begin() + n_train, rows.end());
    }

    // Original row order within each half keeps first-appearance label
    // order identical to the parent dataset.
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

// --- delimited text I/O --------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Splits one line on the delimiter, honoring double-quoted fields
/// ("" inside quotes is an escaped quote). Fields are trimmed.
std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && trim(current).empty()) {
            in_quotes = true;
            current.clear();
        } else if (c == delimiter) {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

std::string quote_field(const std::string& s, char delimiter) {
    if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& column) {
    const std::string t = trim(cell);
    if (t.empty()) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                        "': blank cell");
    }
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                        "': cannot parse '" + t + "' as a finite number");
    }
    return value;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // cells, aligned with header
    std::vector<std::size_t> line_numbers;       // file line of each row
};

RawTable read_table(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
            line[2] == '\xBF') {
            line.erase(0, 3);  // UTF-8 BOM
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_fields(line, delimiter);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": has " +
                            std::to_string(fields.size()) + " cells, header has " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (table.header.empty()) {
        throw DataError("'" + path + "' is empty");
    }
    if (table.rows.empty()) {
        throw DataError("'" + path + "' has a header but no data rows");
    }
    return table;
}

std::size_t column_index(const RawTable& table, const std::string& name,
                         const std::string& path) {
    std::size_t found = table.header.size();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == name) {
            if (found != table.header.size()) {
                throw DataError("'" + path + "': column '" + name + "' appears twice");
            }
            found = i;
        }
    }
    if (found == table.header.size()) {
        throw DataError("'" + path + "': missing column '" + name + "'");
    }
    return found;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::vector<std::string>& feature_columns, char delimiter) {
    const RawTable table = read_table(path, delimiter);

    std::size_t label_idx = table.header.size();
    if (!label_column.empty()) {
        label_idx = column_index(table, label_column, path);
    }

    std::vector<std::string> names = feature_columns;
    if (names.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (i != label_idx) {
                names.push_back(table.header[i]);
            }
        }
    }
    if (names.empty()) {
        throw DataError("'" + path + "': no feature columns");
    }
    std::vector<std::size_t> feature_idx;
    feature_idx.reserve(names.size());
    for (const auto& name : names) {
        feature_idx.push_back(column_index(table, name, path));
    }

    std::vector<FeatureVector> patterns;
    patterns.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        FeatureVector fv;
        fv.values.reserve(names.size());
        for (std::size_t k = 0; k < feature_idx.size(); ++k) {
            fv.values.push_back(
                parse_cell(table.rows[r][feature_idx[k]], table.line_numbers[r], names[k]));
        }
        if (label_idx != table.header.size()) {
            const std::string label = trim(table.rows[r][label_idx]);
            if (label.empty()) {
                throw DataError("line " + std::to_string(table.line_numbers[r]) +
                                ", column '" + label_column + "': blank label");
            }
            fv.label = label;
        }
        patterns.push_back(std::move(fv));
    }
    return build_dataset(std::move(patterns), std::move(names),
                         label_column.empty() ? "label" : label_column);
}

void save_csv(const Dataset& data, const std::string& path, char delimiter) {
    const bool labeled = !data.label_set.empty();
    for (const auto& p : data.patterns) {
        if (labeled && !p.label) {
            throw DataError("save_csv: dataset mixes labeled and unlabeled patterns");
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    for (std::size_t i = 0; i < data.feature_names.size(); ++i) {
        if (i > 0) {
            out << delimiter;
        }
        out << quote_field(data.feature_names[i], delimiter);
    }
    if (labeled) {
        out << delimiter << quote_field(data.label_name, delimiter);
    }
    out << '\n';
    for (const auto& p : data.patterns) {
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (i > 0) {
                out << delimiter;
            }
            out << format_double(p.values[i]);
        }
        if (labeled) {
            out << delimiter << quote_field(*p.label, delimiter);
        }
        out << '\n';
    }
    if (!out) {
        throw DataError("error while writing '" + path + "'");
    }
}

// --- IPF schema ----------------------------------------------------------------

namespace {

std::vector<std::string> split_names(const std::string& value) {
    std::vector<std::string> names;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) {
            names.push_back(t);
        }
    }
    return names;
}

}  // namespace

IpfSchema load_ipf_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open schema '" + path + "'");
    }
    IpfSchema schema;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) +
                            ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "id") {
            schema.id_column = value;
        } else if (key == "label") {
            schema.label_column = value;
        } else if (key == "block1") {
            schema.block1_columns = split_names(value);
        } else if (key == "block2") {
            schema.block2_columns = split_names(value);
        } else if (key == "ignore") {
            schema.ignored_columns = split_names(value);
        } else {
            throw DataError("'" + path + "' line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'");
        }
    }
    if (schema.label_column.empty()) {
        throw DataError("'" + path + "': missing 'label' entry");
    }
    if (schema.block2_columns.empty()) {
        throw DataError("'" + path + "': missing 'block2' entry");
    }
    return schema;
}

Dataset load_ipf(const std::string& csv_path, const IpfSchema& schema, char delimiter) {
    const RawTable table = read_table(csv_path, delimiter);
    if (!schema.id_column.empty()) {
        column_index(table, schema.id_column, csv_path);
    }
    const std::size_t label_idx = column_index(table, schema.label_column, csv_path);

    // Block 1 must be present and numeric, but never reaches the feature
    // matrix: classification experiments use block 2 only.
    std::vector<std::size_t> block1_idx;
    for (const auto& name : schema.block1_columns) {
        block1_idx.push_back(column_index(table, name, csv_path));
    }
    std::vector<std::size_t> block2_idx;
    for (const auto& name : schema.block2_columns) {
        block2_idx.push_back(column_index(table, name, csv_path));
    }

    std::vector<FeatureVector> patterns;
    patterns.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t k = 0; k < block1_idx.size(); ++k) {
            parse_cell(table.rows[r][block1_idx[k]], table.line_numbers[r],
                       schema.block1_columns[k]);
        }
        FeatureVector fv;
        fv.values.reserve(block2_idx.size());
        for (std::size_t k = 0; k < block2_idx.size(); ++k) {
            fv.values.push_back(parse_cell(table.rows[r][block2_idx[k]],
                                           table.line_numbers[r],
                                           schema.block2_columns[k]));
        }
        const std::string label = trim(table.rows[r][label_idx]);
        if (label.empty()) {
            throw DataError("line " + std::to_string(table.line_numbers[r]) + ", column '" +
                            schema.label_column + "': blank label");
        }
        fv.label = label;
        patterns.push_back(std::move(fv));
    }
    return build_dataset(std::move(patterns), schema.block2_columns, schema.label_column);
}

// --- generators ------------------------------------------------------------------

namespace {

std::string class_name(std::size_t index) {
    if (index < 26) {
        return std::string(1, static_cast<char>('A' + index));
    }
    return "class" + std::to_string(index);
}

}  // namespace

Dataset gen_gaussian(std::size_t n_per_class,
                     const std::vector<std::vector<double>>& means,
                     const std::vector<SymMatrix>& covariances, std::uint64_t seed) {
    if (means.empty() || means.size() != covariances.size()) {
        throw ConfigError("gen_gaussian: need one covariance per mean");
    }
    if (n_per_class == 0) {
        throw ConfigError("gen_gaussian: n_per_class must be >= 1");
    }
    const std::size_t d = means.front().size();
    if (d == 0) {
        throw ConfigError("gen_gaussian: dimension must be >= 1");
    }

    // Per-class transform L with L L^T = covariance, from the spectral
    // factorization; works for singular PSD covariances too.
    std::vector<std::vector<double>> transforms;  // row-major d x d
    for (std::size_t c = 0; c < covariances.size(); ++c) {
        if (means[c].size() != d || covariances[c].dim() != d) {
            throw ConfigError("gen_gaussian: class " + std::to_string(c) +
                              " has inconsistent dimensions");
        }
        const EigenResult eig = sym_eigen(covariances[c]);
        const double scale = std::max(1.0, std::abs(eig.eigenvalues.back()));
        if (eig.eigenvalues.front() < -1e-9 * scale) {
            throw ConfigError("gen_gaussian: covariance of class " + std::to_string(c) +
                              " is not positive semidefinite");
        }
        std::vector<double> l(d * d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            const double root = std::sqrt(std::max(0.0, eig.eigenvalues[k]));
            for (std::size_t i = 0; i < d; ++i) {
                l[i * d + k] = eig.eigenvectors[k][i] * root;
            }
        }
        transforms.push_back(std::move(l));
    }

    Rng rng(seed);
    std::vector<FeatureVector> patterns;
    patterns.reserve(n_per_class * means.size());
    std::vector<double> z(d);
    for (std::size_t c = 0; c < means.size(); ++c) {
        const std::string label = class_name(c);
        for (std::size_t i = 0; i < n_per_class; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                z[k] = rng.normal();
            }
            FeatureVector fv;
            fv.values.resize(d);
            for (std::size_t row = 0; row < d; ++row) {
                double v = means[c][row];
                for (std::size_t k = 0; k < d; ++k) {
                    v += transforms[c][row * d + k] * z[k];
                }
                fv.values[row] = v;
            }
            fv.label = label;
            patterns.push_back(std::move(fv));
        }
    }

    std::vector<std::string> names(d);
    for (std::size_t i = 0; i < d; ++i) {
        names[i] = "x" + std::to_string(i + 1);
    }
    return build_dataset(std::move(patterns), std::move(names));
}

Dataset gen_gaussian_default(std::size_t n_per_class, std::uint64_t seed) {
    // Crossed anisotropic classes with identical means: nearest-mean
    // decisions are chance-level while class shape carries the signal.
    SymMatrix cov_a(2);
    cov_a.set(0, 0, 1.0);
    cov_a.set(1, 1, 0.1);
    SymMatrix cov_b(2);
    cov_b.set(0, 0, 0.1);
    cov_b.set(1, 1, 1.0);
    return gen_gaussian(n_per_class, {{0.0, 0.0}, {0.0, 0.0}}, {cov_a, cov_b}, seed);
}

Dataset gen_moon(std::size_t n_per_class, double noise_sigma, std::uint64_t seed) {
    if (n_per_class == 0) {
        throw ConfigError("gen_moon: n_per_class must be >= 1");
    }
    if (noise_sigma < 0.0) {
        throw ConfigError("gen_moon: noise_sigma must be >= 0");
    }
    constexpr double kPi = 3.14159265358979323846;
    Rng rng(seed);
    std::vector<FeatureVector> patterns;
    patterns.reserve(2 * n_per_class);
    const double step = n_per_class > 1 ? kPi / static_cast<double>(n_per_class - 1) : 0.0;
    // First moon: upper unit half-circle. Second moon: the mirrored
    // half-circle offset so the two interleave.
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double theta = step * static_cast<double>(i);
        FeatureVector fv;
        fv.values = {std::cos(theta) + noise_sigma * rng.normal(),
                     std::sin(theta) + noise_sigma * rng.normal()};
        fv.label = "A";
        patterns.push_back(std::move(fv));
    }
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double theta = step * static_cast<double>(i);
        FeatureVector fv;
        fv.values = {1.0 - std::cos(theta) + noise_sigma * rng.normal(),
                     0.5 - std::sin(theta) + noise_sigma * rng.normal()};
        fv.label = "B";
        patterns.push_back(std::move(fv));
    }
    return build_dataset(std::move(patterns), {"x1", "x2"});
}

Dataset gen_banana(std::size_t n_per_class, double curvature, double noise_sigma,
                   std::uint64_t seed) {
    if (n_per_class == 0) {
        throw ConfigError("gen_banana: n_per_class must be >= 1");
    }
    if (noise_sigma < 0.0) {
        throw ConfigError("gen_banana: noise_sigma must be >= 0");
    }
    Rng rng(seed);
    std::vector<FeatureVector> patterns;
    patterns.reserve(2 * n_per_class);
    // Arc offset 0.3 with x in [-1.5, 1.5] leaves the two class means
    // nearly coincident, so the curved shape is the only usable signal.
    for (int cls = 0; cls < 2; ++cls) {
        const double sign = cls == 0 ? 1.0 : -1.0;
        const std::string label = cls == 0 ? "A" : "B";
        for (std::size_t i = 0; i < n_per_class; ++i) {
            const double x = rng.uniform(-1.5, 1.5);
            const double y = sign * (curvature * x * x - 0.3);
            FeatureVector fv;
            fv.values = {x + noise_sigma * rng.normal(), y + noise_sigma * rng.normal()};
            fv.label = label;
            patterns.push_back(std::move(fv));
        }
    }
    return build_dataset(std::move(patterns), {"x1", "x2"});
}

}  // namespace qnmc
