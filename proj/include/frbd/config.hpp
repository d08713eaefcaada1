#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"

namespace frbd {

/// Flat `section.key = value` configuration text. `#` starts a comment,
/// blank lines are ignored, duplicate keys are errors. The schema is strict:
/// consumers mark the keys they understand and everything left over is
/// reported as an unknown key.
struct ParsedConfig {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string raw;  // original bytes (hashed for provenance)
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Typed, error-accumulating access to a ParsedConfig. Getters record every
/// problem (missing required key, bad number, unknown enum word) instead of
/// throwing, so a single pass reports all validation errors at once.
class ConfigReader {
public:
    explicit ConfigReader(const ParsedConfig& cfg);

    bool has(const std::string& key) const;
    std::optional<std::string> take(const std::string& key);

    double number(const std::string& key, double fallback);
    std::optional<double> number_opt(const std::string& key);
    double require_number(const std::string& key);
    int integer(const std::string& key, int fallback);
    std::string word(const std::string& key, const std::string& fallback);
    std::string require_word(const std::string& key);
    bool flag(const std::string& key, bool fallback);
    std::vector<double> number_list(const std::string& key, std::vector<double> fallback);

    void error(const std::string& message) { errors_.push_back(message); }
    /// Flag all unconsumed keys as unknown.
    void finish();
    bool ok() const { return errors_.empty(); }
    const std::vector<std::string>& errors() const { return errors_; }

private:
    const ParsedConfig& cfg_;
    std::vector<bool> consumed_;
    std::vector<std::string> errors_;
};

/// Build the friction model from the model.* keys. Understands three
/// rheology spellings: gm, gkv, and sls (canonical sigma0/sigma1/gamma1
/// converted to a one-branch GM element).
FrBDModel model_from_config(ConfigReader& reader);

/// Build the solver from the solver.* keys; defaults are FixedRK4 with
/// dt = 1e-5 s and t_span (0, default_t1).
SolverConfig solver_from_config(ConfigReader& reader, double default_t1);

}  // namespace frbd
