#pragma once

/**
 * @file config.hpp
 * @brief Flat `key = value` experiment configuration. Lists are comma
 * separated, '#' starts a comment, unknown keys are rejected.
 */

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zqlab/error.hpp"

namespace zqlab::harness {

enum class Experiment {
    dot_incidence,
    det_incidence,
    crossratio_incidence,
    spectrum,
    kloosterman,
    bilinear,
    hyperbola,
    proposition41,
    intersection_charsum,
    zaremba,
    energy,
};

inline const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
    static const std::vector<std::pair<Experiment, std::string>> names = {
        {Experiment::dot_incidence, "dot-incidence"},
        {Experiment::det_incidence, "det-incidence"},
        {Experiment::crossratio_incidence, "crossratio-incidence"},
        {Experiment::spectrum, "spectrum"},
        {Experiment::kloosterman, "kloosterman"},
        {Experiment::bilinear, "bilinear"},
        {Experiment::hyperbola, "hyperbola"},
        {Experiment::proposition41, "proposition41"},
        {Experiment::intersection_charsum, "intersection-charsum"},
        {Experiment::zaremba, "zaremba"},
        {Experiment::energy, "energy"},
    };
    return names;
}

inline std::string to_string(Experiment e) {
    for (const auto& [k, v] : experiment_names())
        if (k == e) return v;
    return "unknown";
}

inline Experiment parse_experiment(const std::string& s) {
    for (const auto& [k, v] : experiment_names())
        if (v == s) return k;
    fail(ErrorCode::invalid_params, "unknown experiment '" + s + "'");
}

enum class OutputFormat { csv, json };

/// Raw key/value pairs with typed accessors. Every accessor records the key
/// as used, so stray keys can be reported.
class ExperimentConfig {
public:
    Experiment experiment = Experiment::dot_incidence;
    std::uint64_t seed = 1;
    std::size_t trials = 10;
    unsigned threads = 1;
    std::uint64_t matrix_cap = 5000;
    std::string out;  ///< empty means stdout
    OutputFormat format = OutputFormat::csv;
    bool timing = false;

    static ExperimentConfig parse(std::istream& in, const std::string& origin = "<config>") {
        ExperimentConfig c;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            require(eq != std::string::npos, ErrorCode::invalid_params,
                    origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            require(!key.empty(), ErrorCode::invalid_params, origin + ":" + std::to_string(lineno) + ": empty key");
            require(!c.values_.count(key), ErrorCode::invalid_params, origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
            c.values_[key] = value;
        }
        c.load_common();
        return c;
    }

    static ExperimentConfig parse_string(const std::string& text) {
        std::istringstream is(text);
        return parse(is, "<string>");
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        require(static_cast<bool>(in), ErrorCode::io, "cannot open config " + path);
        return parse(in, path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    void set(const std::string& key, const std::string& value) {
        values_[key] = value;
        load_common();
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        used_.push_back(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        used_.push_back(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_int(key, it->second);
    }

    std::optional<std::int64_t> get_optional_int(const std::string& key) const {
        used_.push_back(key);
        auto it = values_.find(key);
        if (it == values_.end() || it->second == "random") return std::nullopt;
        return to_int(key, it->second);
    }

    double get_double(const std::string& key, double fallback) const {
        used_.push_back(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            require(pos == it->second.size(), ErrorCode::invalid_params, key + ": trailing characters");
            return v;
        } catch (const std::logic_error&) {
            fail(ErrorCode::invalid_params, key + ": not a number: " + it->second);
        }
    }

    std::vector<std::int64_t> get_int_list(const std::string& key, std::vector<std::int64_t> fallback) const {
        used_.push_back(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<std::int64_t> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!trim(item).empty()) out.push_back(to_int(key, trim(item)));
        return out;
    }

    /// Keys present in the file that no accessor has asked for.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (std::find(used_.begin(), used_.end(), k) == used_.end()) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    mutable std::vector<std::string> used_;

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
    }

    static std::int64_t to_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            require(pos == v.size(), ErrorCode::invalid_params, key + ": trailing characters in '" + v + "'");
            return x;
        } catch (const std::logic_error&) {
            fail(ErrorCode::invalid_params, key + ": not an integer: '" + v + "'");
        }
    }

    void load_common() {
        if (has("experiment")) experiment = parse_experiment(get_string("experiment", ""));
        seed = static_cast<std::uint64_t>(get_int("seed", static_cast<std::int64_t>(seed)));
        const auto t = get_int("trials", static_cast<std::int64_t>(trials));
        require(t >= 0, ErrorCode::invalid_params, "trials must be >= 0");
        trials = static_cast<std::size_t>(t);
        const auto th = get_int("threads", threads);
        require(th >= 1, ErrorCode::invalid_params, "threads must be >= 1");
        threads = static_cast<unsigned>(th);
        const auto cap = get_int("matrix_cap", static_cast<std::int64_t>(matrix_cap));
        require(cap >= 1, ErrorCode::invalid_params, "matrix_cap must be >= 1");
        matrix_cap = static_cast<std::uint64_t>(cap);
        out = get_string("out", out);
        const auto fmt = get_string("format", format == OutputFormat::csv ? "csv" : "json");
        require(fmt == "csv" || fmt == "json", ErrorCode::invalid_params, "format must be csv or json");
        format = fmt == "csv" ? OutputFormat::csv : OutputFormat::json;
        const auto tm = get_string("timing", timing ? "true" : "false");
        require(tm == "true" || tm == "false", ErrorCode::invalid_params, "timing must be true or false");
        timing = tm == "true";
    }
};

}  // namespace zqlab::harness
