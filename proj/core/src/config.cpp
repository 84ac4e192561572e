#include "qnmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qnmc/error.hpp"

namespace qnmc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

KvFile KvFile::parse_string(const std::string& text, const std::string& origin) {
    KvFile file;
    file.origin = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError(origin + " line " + std::to_string(line_no) +
                                  ": malformed section header '" + t + "'");
            }
            KvSection section;
            section.name = trim(t.substr(1, t.size() - 2));
            section.line = line_no;
            file.sections.push_back(std::move(section));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": expected 'key = value' or '[section]'");
        }
        if (file.sections.empty()) {
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": key outside of any [section]");
        }
        KvEntry entry;
        entry.key = trim(t.substr(0, eq));
        entry.value = trim(t.substr(eq + 1));
        entry.line = line_no;
        if (entry.key.empty()) {
            throw ConfigError(origin + " line " + std::to_string(line_no) + ": empty key");
        }
        file.sections.back().entries.push_back(std::move(entry));
    }
    return file;
}

KvFile KvFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

namespace {

/// Typed accessor over one section with unknown-key detection.
class SectionReader {
  public:
    SectionReader(const KvFile& file, const KvSection& section)
        : origin_(file.origin), section_(section) {}

    [[noreturn]] void fail(const KvEntry& entry, const std::string& message) const {
        throw ConfigError(origin_ + " line " + std::to_string(entry.line) + ", key '" +
                          entry.key + "': " + message);
    }

    const KvEntry* find(const std::string& key) const {
        const KvEntry* found = nullptr;
        for (const auto& entry : section_.entries) {
            if (entry.key == key) {
                if (found) {
                    fail(entry, "duplicate key");
                }
                found = &entry;
            }
        }
        return found;
    }

    bool has(const std::string& key) const { return find(key) != nullptr; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const KvEntry* entry = find(key);
        return entry ? entry->value : fallback;
    }

    std::string require_string(const std::string& key) const {
        const KvEntry* entry = find(key);
        if (!entry) {
            throw ConfigError(origin_ + " section [" + section_.name + "] (line " +
                              std::to_string(section_.line) + "): missing key '" + key +
                              "'");
        }
        return entry->value;
    }

    double get_double(const std::string& key, double fallback) const {
        const KvEntry* entry = find(key);
        if (!entry) {
            return fallback;
        }
        return parse_double(*entry);
    }

    std::size_t get_size(const std::string& key, std::size_t fallback) const {
        const KvEntry* entry = find(key);
        if (!entry) {
            return fallback;
        }
        std::size_t value = 0;
        if (!parse_integral(entry->value, value)) {
            fail(*entry, "expected a non-negative integer, got '" + entry->value + "'");
        }
        return value;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        const KvEntry* entry = find(key);
        if (!entry) {
            return fallback;
        }
        std::uint64_t value = 0;
        if (!parse_integral(entry->value, value)) {
            fail(*entry, "expected a 64-bit unsigned integer, got '" + entry->value + "'");
        }
        return value;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const KvEntry* entry = find(key);
        if (!entry) {
            return fallback;
        }
        const std::string& v = entry->value;
        if (v == "true" || v == "yes" || v == "1") {
            return true;
        }
        if (v == "false" || v == "no" || v == "0") {
            return false;
        }
        fail(*entry, "expected true/false, got '" + v + "'");
    }

    double parse_double(const KvEntry& entry) const {
        double value = 0.0;
        const char* first = entry.value.data();
        const char* last = first + entry.value.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
            fail(entry, "expected a finite number, got '" + entry.value + "'");
        }
        return value;
    }

    /// Numbers separated by commas and/or whitespace.
    std::vector<double> parse_number_list(const KvEntry& entry) const {
        std::string normalized = entry.value;
        std::replace(normalized.begin(), normalized.end(), ',', ' ');
        std::istringstream in(normalized);
        std::vector<double> values;
        std::string token;
        while (in >> token) {
            double v = 0.0;
            const char* first = token.data();
            const char* last = first + token.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
                fail(entry, "expected a list of numbers, got '" + entry.value + "'");
            }
            values.push_back(v);
        }
        if (values.empty()) {
            fail(entry, "expected a non-empty list of numbers");
        }
        return values;
    }

    /// Rows of numbers separated by ';', e.g. "0 0 ; 1 1".
    std::vector<std::vector<double>> parse_number_rows(const KvEntry& entry) const {
        std::vector<std::vector<double>> rows;
        std::stringstream ss(entry.value);
        std::string part;
        while (std::getline(ss, part, ';')) {
            KvEntry sub{entry.key, trim(part), entry.line};
            rows.push_back(parse_number_list(sub));
        }
        if (rows.empty()) {
            fail(entry, "expected rows of numbers separated by ';'");
        }
        return rows;
    }

    std::vector<std::string> parse_name_list(const KvEntry& entry) const {
        std::vector<std::string> names;
        std::stringstream ss(entry.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (!t.empty()) {
                names.push_back(t);
            }
        }
        if (names.empty()) {
            fail(entry, "expected a comma-separated list of names");
        }
        return names;
    }

    void allow_only(const std::vector<std::string>& keys) const {
        for (const auto& entry : section_.entries) {
            if (std::find(keys.begin(), keys.end(), entry.key) == keys.end()) {
                fail(entry, "unknown key in section [" + section_.name + "]");
            }
        }
    }

  private:
    template <typename T>
    static bool parse_integral(const std::string& text, T& out) {
        const char* first = text.data();
        const char* last = first + text.size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && ptr == last;
    }

    const std::string& origin_;
    const KvSection& section_;
};

DatasetSpec parse_dataset_section(const KvFile& file, const KvSection& section) {
    SectionReader reader(file, section);
    reader.allow_only({"kind", "path", "schema", "label_column", "feature_columns",
                       "delimiter", "seed", "n_per_class", "noise_sigma", "curvature",
                       "means", "cov_diags"});
    DatasetSpec spec;
    spec.kind = dataset_kind_from_string(reader.require_string("kind"));

    const std::string delim = reader.get_string("delimiter", ",");
    if (delim.size() != 1) {
        throw ConfigError(file.origin + " section [dataset]: delimiter must be one character");
    }
    spec.delimiter = delim[0];

    switch (spec.kind) {
        case DatasetSpec::Kind::Csv:
            spec.path = reader.require_string("path");
            spec.label_column = reader.get_string("label_column", "label");
            if (const KvEntry* entry = reader.find("feature_columns")) {
                spec.feature_columns = reader.parse_name_list(*entry);
            }
            break;
        case DatasetSpec::Kind::Ipf:
            spec.path = reader.require_string("path");
            spec.schema_path = reader.require_string("schema");
            break;
        case DatasetSpec::Kind::Gaussian:
            spec.seed = reader.get_u64("seed", 1);
            spec.n_per_class = reader.get_size("n_per_class", 100);
            if (const KvEntry* entry = reader.find("means")) {
                spec.means = reader.parse_number_rows(*entry);
            }
            if (const KvEntry* entry = reader.find("cov_diags")) {
                spec.cov_diags = reader.parse_number_rows(*entry);
            }
            if (spec.means.empty() != spec.cov_diags.empty()) {
                throw ConfigError(file.origin +
                                  " section [dataset]: means and cov_diags go together");
            }
            break;
        case DatasetSpec::Kind::Moon:
            spec.seed = reader.get_u64("seed", 1);
            spec.n_per_class = reader.get_size("n_per_class", 100);
            spec.noise_sigma = reader.get_double("noise_sigma", 0.1);
            break;
        case DatasetSpec::Kind::Banana:
            spec.seed = reader.get_u64("seed", 1);
            spec.n_per_class = reader.get_size("n_per_class", 2650);
            spec.noise_sigma = reader.get_double("noise_sigma", 0.2);
            spec.curvature = reader.get_double("curvature", 0.5);
            break;
    }
    return spec;
}

ClassifierSpec parse_classifier_section(const KvFile& file, const KvSection& section) {
    SectionReader reader(file, section);
    reader.allow_only({"kind", "encoder", "regularization", "name"});
    ClassifierSpec spec;
    spec.kind = classifier_kind_from_string(reader.require_string("kind"));
    if (const KvEntry* entry = reader.find("encoder")) {
        spec.encoder = encoder_kind_from_string(entry->value);
    }
    spec.regularization = reader.get_double("regularization", 1e-6);
    spec.name = reader.get_string("name", "");
    spec.validate();
    return spec;
}

RescaleSpec parse_rescale_section(const KvFile& file, const KvSection& section) {
    SectionReader reader(file, section);
    reader.allow_only({"preset", "uniform", "weights"});
    RescaleSpec spec;
    const int given = (reader.has("preset") ? 1 : 0) + (reader.has("uniform") ? 1 : 0) +
                      (reader.has("weights") ? 1 : 0);
    if (given != 1) {
        throw ConfigError(file.origin + " section [rescale] (line " +
                          std::to_string(section.line) +
                          "): give exactly one of preset, uniform or weights");
    }
    if (const KvEntry* entry = reader.find("preset")) {
        spec.mode = RescaleSpec::Mode::Preset;
        spec.preset_name = entry->value;
        preset_by_name(spec.preset_name);  // fail early on unknown names
    } else if (const KvEntry* entry = reader.find("uniform")) {
        spec.mode = RescaleSpec::Mode::Uniform;
        spec.uniform_factor = reader.parse_double(*entry);
        if (!(spec.uniform_factor > 0.0)) {
            reader.fail(*entry, "uniform rescaling factor must be > 0");
        }
    } else if (const KvEntry* entry = reader.find("weights")) {
        spec.mode = RescaleSpec::Mode::PerFeature;
        spec.weights = reader.parse_number_list(*entry);
    }
    return spec;
}

}  // namespace

ExperimentConfig parse_experiment_config(const KvFile& file) {
    ExperimentConfig cfg;
    bool have_dataset = false;
    for (const auto& section : file.sections) {
        if (section.name == "dataset") {
            if (have_dataset) {
                throw ConfigError(file.origin + " line " + std::to_string(section.line) +
                                  ": duplicate [dataset] section");
            }
            cfg.dataset = parse_dataset_section(file, section);
            have_dataset = true;
        } else if (section.name == "classifier") {
            cfg.classifiers.push_back(parse_classifier_section(file, section));
        } else if (section.name == "split") {
            SectionReader reader(file, section);
            reader.allow_only({"train_fraction", "stratified"});
            cfg.train_fraction = reader.get_double("train_fraction", 0.8);
            cfg.stratified = reader.get_bool("stratified", true);
        } else if (section.name == "experiment") {
            SectionReader reader(file, section);
            reader.allow_only({"runs", "seed"});
            cfg.runs = reader.get_size("runs", 100);
            cfg.master_seed = reader.get_u64("seed", 0);
        } else if (section.name == "rescale") {
            cfg.rescale = parse_rescale_section(file, section);
        } else {
            throw ConfigError(file.origin + " line " + std::to_string(section.line) +
                              ": unknown section [" + section.name + "]");
        }
    }
    if (!have_dataset) {
        throw ConfigError(file.origin + ": missing [dataset] section");
    }
    if (cfg.classifiers.empty()) {
        throw ConfigError(file.origin + ": need at least one [classifier] section");
    }
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
        throw ConfigError(file.origin + ": train_fraction must lie in (0, 1)");
    }
    if (cfg.runs == 0) {
        throw ConfigError(file.origin + ": runs must be >= 1");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(KvFile::parse_file(path));
}

}  // namespace qnmc
