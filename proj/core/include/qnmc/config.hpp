#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qnmc/evaluation.hpp"

namespace qnmc {

/// One parsed "key = value" line.
struct KvEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// One "[section]" block; sections may repeat ([classifier] does).
struct KvSection {
    std::string name;
    std::size_t line = 0;
    std::vector<KvEntry> entries;
};

/// Sectioned key-value config text. Full-line comments start with '#';
/// parse errors carry the origin and line number.
struct KvFile {
    std::string origin;
    std::vector<KvSection> sections;

    static KvFile parse_string(const std::string& text, const std::string& origin);
    static KvFile parse_file(const std::string& path);
};

/// Binds a parsed config to an ExperimentConfig, validating section and
/// key names and value formats. Errors name the offending line and key.
ExperimentConfig parse_experiment_config(const KvFile& file);

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace qnmc
