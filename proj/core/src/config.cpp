#include "horolab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "horolab/errors.hpp"

namespace horolab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long to_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    errno = 0;
    long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno != 0) {
        // Accept integral values written in floating-point form such as 1e6.
        double d = std::strtod(v.c_str(), &end);
        if (v.empty() || *end != '\0' || d != std::floor(d) || std::abs(d) > 9e18)
            throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
        return static_cast<long>(d);
    }
    return x;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(d))
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    return d;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a boolean");
}

}  // namespace

std::vector<double> ExperimentConfig::times() const {
    std::vector<double> t;
    long steps = std::lround((t_max - t_min) / t_step);
    for (long k = 0; k <= steps; ++k) t.push_back(t_min + k * t_step);
    return t;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"verify-core", "plancherel", "quantize-check",
                                                "mixing",      "trace-decay", "summability"};
    return names;
}

ExperimentConfig defaults_for(const std::string& subcommand) {
    ExperimentConfig c;
    c.subcommand = subcommand;
    if (subcommand == "quantize-check") {
        c.n_b = 256;
        c.n_r = 96;
        c.n_rho = 32;
    } else if (subcommand == "trace-decay") {
        c.n = 100000;
        c.t_max = 6.0;
        c.fit_t1 = 6.0;
    }
    return c;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& v) {
    if (key == "seed") {
        long s = to_long(key, v);
        if (s < 0) throw ConfigError("key 'seed': must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "n") c.n = to_long(key, v);
    else if (key == "n_b") c.n_b = static_cast<int>(to_long(key, v));
    else if (key == "n_r") c.n_r = static_cast<int>(to_long(key, v));
    else if (key == "panel_order") c.panel_order = static_cast<int>(to_long(key, v));
    else if (key == "r_max") c.r_max = to_double(key, v);
    else if (key == "support_radius") c.support_radius = to_double(key, v);
    else if (key == "n_rho") c.n_rho = static_cast<int>(to_long(key, v));
    else if (key == "n_phi") c.n_phi = static_cast<int>(to_long(key, v));
    else if (key == "ball_length") c.ball_length = static_cast<int>(to_long(key, v));
    else if (key == "t_min") c.t_min = to_double(key, v);
    else if (key == "t_max") c.t_max = to_double(key, v);
    else if (key == "t_step") c.t_step = to_double(key, v);
    else if (key == "fit_t0") c.fit_t0 = to_double(key, v);
    else if (key == "fit_t1") c.fit_t1 = to_double(key, v);
    else if (key == "records") c.records = static_cast<int>(to_long(key, v));
    else if (key == "n_theta") c.n_theta = static_cast<int>(to_long(key, v));
    else if (key == "eigendata") c.eigendata = v;
    else if (key == "out") c.out = v;
    else if (key == "force") c.force = to_bool(key, v);
    else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> errors;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        try {
            set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg = "configuration errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return base;
}

void validate_config(const ExperimentConfig& c) {
    std::vector<std::string> errors;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    need(c.n >= 2, "n must be at least 2");
    need(c.n_b > 0 && (c.n_b & (c.n_b - 1)) == 0, "n_b must be a power of two");
    need(c.panel_order > 0 && c.n_r > 0 && c.n_r % c.panel_order == 0, "n_r must be a positive multiple of panel_order");
    need(c.r_max > 0, "r_max must be positive");
    need(c.support_radius > 1.0, "support_radius must exceed 1");
    need(c.n_rho >= 4 && c.n_phi >= 4, "n_rho and n_phi must be at least 4");
    need(c.ball_length >= 0 && c.ball_length <= 12, "ball_length must lie in [0, 12]");
    need(c.t_step > 0 && c.t_max >= c.t_min && c.t_min >= 0, "time grid must satisfy 0 <= t_min <= t_max, t_step > 0");
    need(c.fit_t1 > c.fit_t0, "fit window must be non-empty");
    need(c.records >= 0, "records must be nonnegative");
    need(c.n_theta > 0, "n_theta must be positive");
    need(!c.out.empty(), "out must be non-empty");
    if (!errors.empty()) {
        std::string msg = "configuration errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

}  // namespace horolab
