#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llob/common.hpp"
#include "llob/model.hpp"
#include "llob/trajectory.hpp"

namespace llob::io {

using json = nlohmann::json;

/// Write a trajectory as CSV: columns t, x_t, impact (x_t is the displaced
/// price with x_0 = 0, so the two value columns coincide by construction).
inline void write_trajectory_csv(const ImpactTrajectory& traj,
                                 const std::string& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write " + path);
    out << "t,x_t,impact\n";
    out.precision(17);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        out << traj.times[i] << ',' << traj.impact[i] << ',' << traj.impact[i]
            << '\n';
}

inline void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write " + path);
    out << j.dump(2) << '\n';
}

/// Flat key-value config with [section] headers and '#' comments. Keys are
/// exposed as "section.key". CLI overrides are applied on top.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("config file not found: " + path);
        Config cfg;
        cfg.source_ = path;
        std::string line, section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            if (s.front() == '[' && s.back() == ']') {
                section = strip(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw config_error(path + ":" + std::to_string(line_no) +
                                   ": expected key = value");
            std::string key = strip(s.substr(0, eq));
            std::string val = strip(s.substr(eq + 1));
            if (auto hash = val.find('#'); hash != std::string::npos)
                val = strip(val.substr(0, hash));
            cfg.values_[section.empty() ? key : section + "." + key] = val;
        }
        return cfg;
    }

    void set(const std::string& dotted_key, const std::string& value) {
        values_[dotted_key] = value;
    }

    /// Apply "section.key=value" override strings.
    void apply_overrides(const std::vector<std::string>& kvs) {
        for (const auto& kv : kvs) {
            auto eq = kv.find('=');
            require(eq != std::string::npos, "override must be key=value: " + kv);
            set(strip(kv.substr(0, eq)), strip(kv.substr(eq + 1)));
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_str(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw config_error("missing config key '" + key + "'");
        return it->second;
    }

    std::string get_str(const std::string& key, const std::string& dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    double get_num(const std::string& key) const {
        return parse_num(key, get_str(key));
    }

    double get_num(const std::string& key, double dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : parse_num(key, it->second);
    }

    long long get_int(const std::string& key, long long dflt) const {
        double v = get_num(key, static_cast<double>(dflt));
        return static_cast<long long>(v);
    }

    /// Complete resolved configuration, for embedding in output bundles.
    json echo() const {
        json j = json::object();
        for (const auto& [k, v] : values_) j[k] = v;
        if (!source_.empty()) j["__file"] = source_;
        return j;
    }

    const std::string& source() const { return source_; }

private:
    static std::string strip(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static double parse_num(const std::string& key, const std::string& val) {
        try {
            std::size_t pos = 0;
            double v = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw config_error("config key '" + key + "': not a number: '" + val + "'");
        }
    }

    std::map<std::string, std::string> values_;
    std::string source_;
};

/// ModelParams from a config's [model] section. Finite-memory when nu > 0 and
/// lam given; infinite-memory when nu = 0 and liquidity given. Alternatively
/// sigma1/v1/tm market observables.
inline ModelParams model_from_config(const Config& cfg) {
    if (cfg.has("model.v1") && cfg.has("model.tm"))
        return params_from_market(cfg.get_num("model.sigma1"),
                                  cfg.get_num("model.v1"), cfg.get_num("model.tm"));
    double sigma1 = cfg.get_num("model.sigma1");
    double nu = cfg.get_num("model.nu");
    if (nu == 0.0)
        return ModelParams::infinite_memory(sigma1, cfg.get_num("model.liquidity"));
    return ModelParams::finite_memory(sigma1, nu, cfg.get_num("model.lam"));
}

inline json params_echo(const ModelParams& p) {
    json j;
    j["sigma1"] = p.sigma1();
    j["nu"] = p.nu();
    j["lam"] = p.lam();
    j["liquidity"] = p.liquidity();
    j["daily_volume"] = p.daily_volume();
    j["memory_time"] = p.infinite() ? json("inf") : json(p.memory_time());
    return j;
}

}  // namespace llob::io
