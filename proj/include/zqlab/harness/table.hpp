#pragma once

/**
 * @file table.hpp
 * @brief Experiment records as typed string tables, written as CSV (with a
 * JSON schema beside it) or as one JSON document.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "zqlab/error.hpp"
#include "zqlab/rational.hpp"

namespace zqlab::harness {

enum class ColumnType { exact, real, text };

inline const char* to_string(ColumnType t) {
    switch (t) {
        case ColumnType::exact: return "exact";
        case ColumnType::real: return "float";
        case ColumnType::text: return "text";
    }
    return "text";
}

struct Column {
    std::string name;
    ColumnType type;
    std::string doc;
};

inline std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt(std::int64_t x) { return std::to_string(x); }
inline std::string fmt(std::uint64_t x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(unsigned x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "true" : "false"; }
inline std::string fmt(const Rational& x) { return zqlab::to_string(x); }
inline std::string fmt(const BigInt& x) { return x.str(); }
inline std::string fmt(const std::string& x) { return x; }
inline std::string fmt(const char* x) { return x; }

/// Records of one experiment. Rows hold formatted cells aligned with columns;
/// a row may be shorter than the header, and missing cells are empty.
class Table {
public:
    Table(std::string experiment, std::vector<Column> columns) : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

    const std::string& experiment() const noexcept { return experiment_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& hard_failures() const noexcept { return failures_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i].name == name) return i;
        fail(ErrorCode::invalid_argument, "no column " + name);
    }

    void add_row(std::vector<std::string> row) {
        require(row.size() <= columns_.size(), ErrorCode::invalid_argument, "row wider than header");
        row.resize(columns_.size());
        rows_.push_back(std::move(row));
    }

    void add_failure(std::string what) { failures_.push_back(std::move(what)); }
    void add_note(std::string what) { notes_.push_back(std::move(what)); }

    /// Appends "summary:min" and "summary:median" rows over the named float
    /// columns (the first column carries the label).
    void add_summary(const std::vector<std::string>& names) {
        if (rows_.empty()) return;
        std::vector<std::string> lo(columns_.size()), med(columns_.size());
        lo[0] = "summary:min";
        med[0] = "summary:median";
        for (const auto& name : names) {
            const auto c = column(name);
            std::vector<double> v;
            for (const auto& r : rows_)
                if (!r[c].empty()) v.push_back(std::stod(r[c]));
            if (v.empty()) continue;
            std::sort(v.begin(), v.end());
            lo[c] = fmt(v.front());
            const std::size_t n = v.size();
            med[c] = fmt(n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0);
        }
        summary_.push_back(std::move(lo));
        summary_.push_back(std::move(med));
    }

    const std::vector<std::vector<std::string>>& summary() const noexcept { return summary_; }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            os << (i ? "," : "") << columns_[i].name << "[" << to_string(columns_[i].type) << "]";
        os << "\n";
        auto emit = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quote(r[i]);
            os << "\n";
        };
        for (const auto& r : rows_) emit(r);
        for (const auto& r : summary_) emit(r);
    }

    nlohmann::ordered_json schema() const {
        nlohmann::ordered_json s;
        s["experiment"] = experiment_;
        s["float_format"] = "%.17g";
        s["summary_rows"] = {"summary:min", "summary:median"};
        auto& cols = s["columns"] = nlohmann::ordered_json::array();
        for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"type", to_string(c.type)}, {"doc", c.doc}});
        return s;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["experiment"] = experiment_;
        j["schema"] = schema()["columns"];
        auto cell = [&](std::size_t c, const std::string& v) -> nlohmann::ordered_json {
            if (v.empty()) return nullptr;
            switch (columns_[c].type) {
                case ColumnType::real:
                    if (v == "inf" || v == "-inf" || v == "nan") return v;
                    return std::stod(v);
                case ColumnType::exact:
                    if (v.find_first_not_of("-0123456789") == std::string::npos && v.size() < 19) return std::stoll(v);
                    return v;
                case ColumnType::text: return v;
            }
            return v;
        };
        auto rows_json = [&](const std::vector<std::vector<std::string>>& rows) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& r : rows) {
                nlohmann::ordered_json o;
                for (std::size_t c = 0; c < columns_.size(); ++c) o[columns_[c].name] = cell(c, r[c]);
                arr.push_back(std::move(o));
            }
            return arr;
        };
        j["records"] = rows_json(rows_);
        j["summary"] = rows_json(summary_);
        j["hard_failures"] = failures_;
        j["notes"] = notes_;
        return j;
    }

private:
    std::string experiment_;
    std::vector<Column> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::vector<std::string>> summary_;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;

    static std::string quote(const std::string& v) {
        if (v.find_first_of(",\"\n") == std::string::npos) return v;
        std::string out = "\"";
        for (char ch : v) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return out + "\"";
    }
};

}  // namespace zqlab::harness
