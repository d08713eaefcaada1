#include "frbd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frbd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    cfg.raw = text;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> errors;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) +
                             ": keys must be of the form section.name");
            continue;
        }
        const bool duplicate =
            std::any_of(cfg.entries.begin(), cfg.entries.end(),
                        [&key](const auto& e) { return e.first == key; });
        if (duplicate) {
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }
        cfg.entries.emplace_back(key, value);
    }
    if (!errors.empty()) {
        std::string what = "config syntax errors:";
        for (const auto& e : errors) what += "\n  " + e;
        throw std::invalid_argument(what);
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

ConfigReader::ConfigReader(const ParsedConfig& cfg)
    : cfg_(cfg), consumed_(cfg.entries.size(), false) {}

bool ConfigReader::has(const std::string& key) const {
    for (const auto& [k, v] : cfg_.entries)
        if (k == key) return true;
    return false;
}

std::optional<std::string> ConfigReader::take(const std::string& key) {
    for (std::size_t i = 0; i < cfg_.entries.size(); ++i) {
        if (cfg_.entries[i].first == key) {
            consumed_[i] = true;
            return cfg_.entries[i].second;
        }
    }
    return std::nullopt;
}

std::optional<double> ConfigReader::number_opt(const std::string& key) {
    const auto raw = take(key);
    if (!raw) return std::nullopt;
    double v = 0.0;
    const char* begin = raw->data();
    const char* end = raw->data() + raw->size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        error(key + ": expected a number, got '" + *raw + "'");
        return std::nullopt;
    }
    return v;
}

double ConfigReader::number(const std::string& key, double fallback) {
    return number_opt(key).value_or(fallback);
}

double ConfigReader::require_number(const std::string& key) {
    if (!has(key)) {
        error(key + ": required key is missing");
        return 0.0;
    }
    return number_opt(key).value_or(0.0);
}

int ConfigReader::integer(const std::string& key, int fallback) {
    const auto v = number_opt(key);
    if (!v) return fallback;
    const int i = static_cast<int>(*v);
    if (static_cast<double>(i) != *v) error(key + ": expected an integer");
    return i;
}

std::string ConfigReader::word(const std::string& key, const std::string& fallback) {
    return take(key).value_or(fallback);
}

std::string ConfigReader::require_word(const std::string& key) {
    const auto raw = take(key);
    if (!raw) {
        error(key + ": required key is missing");
        return "";
    }
    return *raw;
}

bool ConfigReader::flag(const std::string& key, bool fallback) {
    const auto raw = take(key);
    if (!raw) return fallback;
    if (*raw == "true" || *raw == "1") return true;
    if (*raw == "false" || *raw == "0") return false;
    error(key + ": expected true or false, got '" + *raw + "'");
    return fallback;
}

std::vector<double> ConfigReader::number_list(const std::string& key,
                                              std::vector<double> fallback) {
    const auto raw = take(key);
    if (!raw) return fallback;
    std::vector<double> out;
    std::stringstream ss(*raw);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        double v = 0.0;
        const char* begin = cell.data();
        const char* end = cell.data() + cell.size();
        const auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc{} || res.ptr != end) {
            error(key + ": expected a comma-separated number list, got '" + *raw + "'");
            return fallback;
        }
        out.push_back(v);
    }
    if (out.empty()) {
        error(key + ": empty list");
        return fallback;
    }
    return out;
}

void ConfigReader::finish() {
    for (std::size_t i = 0; i < cfg_.entries.size(); ++i)
        if (!consumed_[i]) error(cfg_.entries[i].first + ": unknown key");
}

namespace {

// Constructor exceptions become reader errors so the whole config is
// reported in one pass.
template <typename Fn>
auto guarded(ConfigReader& reader, Fn&& fn, const char* context)
    -> std::optional<decltype(fn())> {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        reader.error(std::string(context) + ": " + e.what());
        return std::nullopt;
    }
}

}  // namespace

FrBDModel model_from_config(ConfigReader& reader) {
    const std::string rheology = reader.word("model.rheology", "gm");
    const double p = reader.number("model.p", 1.0);
    const double epsilon = reader.number("model.epsilon", 0.0);
    const std::string reg_form = reader.word("model.reg", "smooth_sqrt");

    Regularization reg;
    if (reg_form == "exact") {
        reg = Regularization::exact();
        if (epsilon != 0.0) reader.error("model.epsilon: must be 0 for the exact form");
    } else if (reg_form == "smooth_sqrt") {
        const auto made = guarded(
            reader, [&] { return Regularization::smooth_sqrt(epsilon); }, "model.epsilon");
        if (made) reg = *made;
    } else {
        reader.error("model.reg: unknown form '" + reg_form + "' (smooth_sqrt | exact)");
    }

    FrictionLaw law = FrictionLaw::constant(1.0);
    const std::string law_kind = reader.word("model.law", "stribeck");
    if (law_kind == "stribeck") {
        const double mu_d = reader.number("model.mu_d", 1.0);
        const double mu_s = reader.number("model.mu_s", 1.5);
        const double v_s = reader.number("model.v_s", 0.01);
        const double delta = reader.number("model.delta", 2.0);
        const auto made = guarded(
            reader, [&] { return FrictionLaw::stribeck(mu_d, mu_s, v_s, delta); }, "model.law");
        if (made) law = *made;
    } else if (law_kind == "constant") {
        const double mu = reader.number("model.mu", 1.0);
        const auto made =
            guarded(reader, [&] { return FrictionLaw::constant(mu); }, "model.law");
        if (made) law = *made;
    } else {
        reader.error("model.law: unknown law '" + law_kind + "' (stribeck | constant)");
    }

    if (rheology == "sls") {
        const double sigma0 = reader.require_number("model.sigma0");
        const double sigma1 = reader.require_number("model.sigma1");
        const double gamma1 = reader.require_number("model.gamma1");
        const auto gm = guarded(
            reader,
            [&] { return gm_from_canonical(SlsCanonical(sigma0, sigma1, gamma1)); },
            "model.sigma0/sigma1/gamma1");
        if (gm && reader.ok()) return FrBDModel(*gm, law, reg, p);
        return {};
    }

    if (rheology != "gm" && rheology != "gkv") {
        reader.error("model.rheology: unknown rheology '" + rheology + "' (gm | gkv | sls)");
        return {};
    }

    const int n = reader.integer("model.n", 1);
    if (n < 0) reader.error("model.n: must be >= 0");
    const double k0 = reader.require_number("model.k0");
    std::vector<double> ks, seconds;
    for (int i = 1; i <= std::max(n, 0); ++i) {
        ks.push_back(reader.require_number("model.k" + std::to_string(i)));
        seconds.push_back(reader.require_number(
            "model." + std::string(rheology == "gm" ? "tau" : "c") + std::to_string(i)));
    }
    if (!reader.ok()) return {};

    if (rheology == "gm") {
        std::vector<MaxwellBranch> branches;
        for (std::size_t i = 0; i < ks.size(); ++i) branches.push_back({ks[i], seconds[i]});
        const auto gm =
            guarded(reader, [&] { return GMParams(k0, branches); }, "model (GM parameters)");
        if (gm && reader.ok()) return FrBDModel(*gm, law, reg, p);
        return {};
    }
    std::vector<KelvinVoigtBranch> branches;
    for (std::size_t i = 0; i < ks.size(); ++i) branches.push_back({ks[i], seconds[i]});
    const auto gkv =
        guarded(reader, [&] { return GKVParams(k0, branches); }, "model (GKV parameters)");
    if (gkv && reader.ok()) return FrBDModel(*gkv, law, reg, p);
    return {};
}

SolverConfig solver_from_config(ConfigReader& reader, double default_t1) {
    SolverConfig cfg;
    const std::string method = reader.word("solver.method", "rk4");
    if (method == "rk4") {
        cfg.method = SolverConfig::Method::FixedRk4;
    } else if (method == "rk45") {
        cfg.method = SolverConfig::Method::AdaptiveRk45;
    } else {
        reader.error("solver.method: unknown method '" + method + "' (rk4 | rk45)");
    }
    cfg.dt = reader.number("solver.dt", 1e-5);
    cfg.rtol = reader.number("solver.rtol", 1e-8);
    cfg.atol = reader.number("solver.atol", 1e-10);
    cfg.dt_min = reader.number("solver.dt_min", 1e-12);
    cfg.dt_max = reader.number("solver.dt_max", 1e-2);
    cfg.t0 = reader.number("solver.t0", 0.0);
    cfg.t1 = reader.number("solver.t1", default_t1);
    cfg.record_stride = reader.integer("solver.record_stride", 1);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        reader.error(std::string("solver: ") + e.what());
    }
    return cfg;
}

}  // namespace frbd
