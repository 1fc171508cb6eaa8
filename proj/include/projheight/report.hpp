#pragma once

// Deterministic text/CSV/JSON rendering of command output.
//
// Rows are flat objects of scalars (string, integer, bool). Key order is
// insertion order, so identical inputs always render byte-identically.

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "projheight/errors.hpp"

namespace projheight {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";

struct OutputRecord {
    std::string schema_version{kSchemaVersion};
    std::string command;
    Json parameters = Json::object();
    std::vector<Json> rows;
    Json summary = Json::object();
};

enum class Format { text, csv, json };

inline Format parse_format(std::string_view s) {
    if (s == "text") return Format::text;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InputError("unknown format '" + std::string(s) + "' (expected text, csv or json)");
}

/// Scalar cell as it appears in CSV and text output.
inline std::string cell_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

inline Json to_json(const OutputRecord& rec) {
    Json j = Json::object();
    j["schema_version"] = rec.schema_version;
    j["command"] = rec.command;
    j["parameters"] = rec.parameters;
    j["rows"] = Json::array();
    for (const auto& r : rec.rows) j["rows"].push_back(r);
    j["summary"] = rec.summary;
    return j;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::vector<std::string> column_names(const std::vector<Json>& rows) {
    std::vector<std::string> cols;
    if (!rows.empty())
        for (const auto& [k, v] : rows.front().items()) cols.push_back(k);
    return cols;
}

} // namespace detail

/// Header line plus one line per row; columns come from the first row.
inline std::string render_csv(const std::vector<Json>& rows) {
    std::ostringstream os;
    const auto cols = detail::column_names(rows);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << detail::csv_escape(cols[i]);
    if (!cols.empty()) os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto it = r.find(cols[i]);
            os << (i ? "," : "") << detail::csv_escape(it == r.end() ? std::string{} : cell_text(*it));
        }
        os << '\n';
    }
    return os.str();
}

inline std::string render_summary_text(const Json& summary) {
    std::ostringstream os;
    for (const auto& [k, v] : summary.items()) os << k << ": " << cell_text(v) << '\n';
    return os.str();
}

inline std::string render_text(const OutputRecord& rec) {
    std::ostringstream os;
    os << "# " << rec.command;
    for (const auto& [k, v] : rec.parameters.items()) os << ' ' << k << '=' << cell_text(v);
    os << '\n';
    const auto cols = detail::column_names(rec.rows);
    if (!cols.empty()) {
        std::vector<std::size_t> width(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
        for (const auto& r : rec.rows)
            for (std::size_t i = 0; i < cols.size(); ++i)
                width[i] = std::max(width[i], cell_text(r.value(cols[i], Json())).size());
        auto line = [&](auto&& cell) {
            std::string out;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                std::string c = cell(i);
                if (i + 1 < cols.size()) c.resize(width[i], ' ');
                out += (i ? "  " : "") + c;
            }
            return out + '\n';
        };
        os << line([&](std::size_t i) { return cols[i]; });
        for (const auto& r : rec.rows) os << line([&](std::size_t i) { return cell_text(r.value(cols[i], Json())); });
    }
    os << render_summary_text(rec.summary);
    return os.str();
}

inline std::string render(const OutputRecord& rec, Format f) {
    switch (f) {
    case Format::text: return render_text(rec);
    case Format::csv: return render_csv(rec.rows);
    case Format::json: return to_json(rec).dump(2) + '\n';
    }
    return {};
}

/// Summary-only view, used when the full report goes to a file.
inline std::string render_summary(const OutputRecord& rec, Format f) {
    switch (f) {
    case Format::text: {
        OutputRecord head = rec;
        head.rows.clear();
        return render_text(head);
    }
    case Format::csv: {
        std::ostringstream os;
        os << "key,value\n";
        for (const auto& [k, v] : rec.summary.items()) os << detail::csv_escape(k) << ',' << detail::csv_escape(cell_text(v)) << '\n';
        return os.str();
    }
    case Format::json: {
        Json j = to_json(rec);
        j.erase("rows");
        return j.dump(2) + '\n';
    }
    }
    return {};
}

} // namespace projheight
