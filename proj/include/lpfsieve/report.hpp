// report.hpp
// Flattening of harness records into report rows, CSV/JSON emission and
// CSV parsing, plus the grid/z-rule mini-languages used by the CLI:
//
//   --x  16,100,1000 | pow2:a..b | pow10:a..b | geom:a..b:n
//   --z  sqrt | logx | fixed:N | N

#pragma once

#include "lpfsieve/densities.hpp"
#include "lpfsieve/error_lab.hpp"
#include "lpfsieve/errors.hpp"
#include "lpfsieve/rational.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lpfsieve {

// Ordered (column, value) pairs; absent values are empty strings.
struct ReportRow {
    std::vector<std::pair<std::string, std::string>> cells;

    const std::string& at(std::string_view key) const {
        for (const auto& [k, v] : cells)
            if (k == key) return v;
        throw std::out_of_range("no column " + std::string(key));
    }
    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
    std::vector<std::string> columns;
    std::vector<ReportRow> rows;
};

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols{
        "x",           "z",           "survivors",      "main_term_exact",
        "main_term_dec", "error_exact", "error_dec",     "pi_z",
        "log2_legendre_bound", "b3_exact", "b3_dec",    "frac_remainder_exact",
        "ratio_error_to_pi_z", "flags", "ratio_error_log_x_over_x"};
    return cols;
}

inline const std::vector<std::string>& chebyshev_columns() {
    static const std::vector<std::string> cols{"x",           "z_used",         "pi_x",
                                               "survivors",   "pi_z",           "s_plus_pi_z",
                                               "mertens_upper_dec", "holds_54", "holds_53"};
    return cols;
}

inline const std::vector<std::string>& blowup_columns() {
    static const std::vector<std::string> cols{"z", "pi_z", "term_count", "value", "wall_time_s", "error"};
    return cols;
}

inline const std::vector<std::string>& density_columns() {
    static const std::vector<std::string> cols{"p",           "g_exact",         "g_dec",
                                               "partial_sum_exact", "partial_sum_dec",
                                               "mertens_below_p_exact", "mertens_below_p_dec"};
    return cols;
}

inline ReportRow to_row(const ErrorRecord& r) {
    auto opt_exact = [](const std::optional<Rational>& q) { return q ? q->to_string() : std::string(); };
    auto opt_dec = [](const std::optional<Rational>& q) { return q ? q->to_decimal(30) : std::string(); };
    auto opt_real = [](const std::optional<Real>& v) { return v ? format_real(*v, 30) : std::string(); };

    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    if (r.failure) flags += (flags.empty() ? "failed: " : ";failed: ") + *r.failure;

    ReportRow row;
    auto put = [&](std::string k, std::string v) { row.cells.emplace_back(std::move(k), std::move(v)); };
    put("x", std::to_string(r.x));
    put("z", std::to_string(r.z));
    if (r.failure) {
        for (std::size_t i = 2; i < sweep_columns().size(); ++i)
            put(sweep_columns()[i], sweep_columns()[i] == "flags" ? flags : "");
        return row;
    }
    put("survivors", std::to_string(r.survivors));
    put("main_term_exact", r.main_term.to_string());
    put("main_term_dec", r.main_term.to_decimal(30));
    put("error_exact", r.error.to_string());
    put("error_dec", r.error.to_decimal(30));
    put("pi_z", std::to_string(r.pi_z));
    put("log2_legendre_bound", std::to_string(r.log2_legendre_bound));
    put("b3_exact", opt_exact(r.b3_bound));
    put("b3_dec", opt_dec(r.b3_bound));
    put("frac_remainder_exact", opt_exact(r.frac_remainder));
    put("ratio_error_to_pi_z", opt_real(r.ratio_error_to_pi_z));
    put("flags", flags);
    put("ratio_error_log_x_over_x", opt_real(r.ratio_error_log_x_over_x));
    return row;
}

inline ReportRow to_row(const ChebyshevRecord& r) {
    ReportRow row;
    row.cells = {{"x", std::to_string(r.x)},
                 {"z_used", std::to_string(r.z_used)},
                 {"pi_x", std::to_string(r.pi_x)},
                 {"survivors", std::to_string(r.survivors)},
                 {"pi_z", std::to_string(r.pi_z)},
                 {"s_plus_pi_z", std::to_string(r.s_plus_pi_z)},
                 {"mertens_upper_dec", format_real(r.mertens_upper, 30)},
                 {"holds_54", r.holds_54 ? "true" : "false"},
                 {"holds_53", r.holds_53 ? "true" : "false"}};
    return row;
}

inline ReportRow to_row(const BlowupRow& r) {
    std::ostringstream t;
    t.precision(6);
    t << std::fixed << r.wall_time_s;
    ReportRow row;
    row.cells = {{"z", std::to_string(r.z)},
                 {"pi_z", std::to_string(r.pi_z)},
                 {"term_count", r.error ? "" : std::to_string(r.term_count)},
                 {"value", r.value ? std::to_string(*r.value) : ""},
                 {"wall_time_s", t.str()},
                 {"error", r.error.value_or("")}};
    return row;
}

inline ReportRow to_row(const DensityEntry& e) {
    ReportRow row;
    row.cells = {{"p", std::to_string(e.p)},
                 {"g_exact", e.g.to_string()},
                 {"g_dec", e.g.to_decimal(30)},
                 {"partial_sum_exact", e.partial_sum.to_string()},
                 {"partial_sum_dec", e.partial_sum.to_decimal(30)},
                 {"mertens_below_p_exact", e.mertens_below_p.to_string()},
                 {"mertens_below_p_dec", e.mertens_below_p.to_decimal(30)}};
    return row;
}

template <typename Records>
Report make_report(const std::vector<std::string>& columns, const Records& records) {
    Report rep;
    rep.columns = columns;
    for (const auto& r : records) rep.rows.push_back(to_row(r));
    return rep;
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting: fields containing , " or newlines are quoted)

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const Report& rep) {
    for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << csv_escape(rep.columns[i]);
    os << '\n';
    for (const auto& row : rep.rows) {
        for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << csv_escape(row.at(rep.columns[i]));
        os << '\n';
    }
}

inline std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(fields));
            fields.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw ConfigError("CSV: unterminated quoted field");
    if (any || !field.empty() || !fields.empty()) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }
    return records;
}

inline Report parse_csv(std::string_view text) {
    const auto records = parse_csv_records(text);
    Report rep;
    if (records.empty()) return rep;
    rep.columns = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != rep.columns.size())
            throw ConfigError("CSV: row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                              " fields, header has " + std::to_string(rep.columns.size()));
        ReportRow row;
        for (std::size_t i = 0; i < rep.columns.size(); ++i) row.cells.emplace_back(rep.columns[i], records[r][i]);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// JSON: array of objects keyed like the CSV header, in column order.
inline void write_json(std::ostream& os, const Report& rep) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& c : rep.columns) obj[c] = row.at(c);
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
}

inline void write_report(std::ostream& os, const Report& rep, OutputFormat fmt) {
    if (fmt == OutputFormat::Json)
        write_json(os, rep);
    else
        write_csv(os, rep);
}

// ---------------------------------------------------------------------------
// grid and z-rule parsing

namespace detail {

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    // accept 1e6 style decimal exponents for convenience
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const std::uint64_t mant = parse_u64(s.substr(0, e), what);
        const std::uint64_t ex = parse_u64(s.substr(e + 1), what);
        unsigned __int128 acc = mant;
        for (std::uint64_t i = 0; i < ex; ++i) {
            acc *= 10;
            if (acc > UINT64_MAX) throw ConfigError(std::string(what) + " overflows: " + std::string(s));
        }
        return static_cast<std::uint64_t>(acc);
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty())
        throw ConfigError(std::string(what) + ": expected an unsigned integer, got '" + std::string(s) + "'");
    return v;
}

inline std::pair<std::uint64_t, std::uint64_t> parse_range(std::string_view s, std::string_view what) {
    const auto dots = s.find("..");
    if (dots == std::string_view::npos) throw ConfigError(std::string(what) + ": expected a..b, got '" + std::string(s) + "'");
    const auto a = parse_u64(s.substr(0, dots), what);
    const auto b = parse_u64(s.substr(dots + 2), what);
    if (a > b) throw ConfigError(std::string(what) + ": empty range " + std::string(s));
    return {a, b};
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

inline std::vector<std::uint64_t> parse_x_spec(std::string_view spec) {
    const std::string s = detail::trim(spec);
    std::vector<std::uint64_t> xs;
    if (s.empty()) return xs;
    if (s.starts_with("pow2:") || s.starts_with("pow10:")) {
        const bool two = s.starts_with("pow2:");
        const auto [a, b] = detail::parse_range(std::string_view(s).substr(two ? 5 : 6), "--x");
        const std::uint64_t base = two ? 2 : 10;
        for (std::uint64_t k = a; k <= b; ++k) {
            unsigned __int128 v = 1;
            for (std::uint64_t i = 0; i < k; ++i) {
                v *= base;
                if (v > UINT64_MAX) throw ConfigError("--x: " + std::to_string(base) + "^" + std::to_string(k) + " overflows");
            }
            xs.push_back(static_cast<std::uint64_t>(v));
        }
        return xs;
    }
    if (s.starts_with("geom:")) {
        const std::string_view body = std::string_view(s).substr(5);
        const auto colon = body.rfind(':');
        if (colon == std::string_view::npos) throw ConfigError("--x: expected geom:a..b:n");
        const auto [a, b] = detail::parse_range(body.substr(0, colon), "--x");
        const auto n = detail::parse_u64(body.substr(colon + 1), "--x");
        if (a == 0 || n < 1) throw ConfigError("--x: geom needs a >= 1 and n >= 1");
        if (n == 1) return {a};
        const long double ratio = std::pow(static_cast<long double>(b) / a, 1.0L / static_cast<long double>(n - 1));
        for (std::uint64_t i = 0; i < n; ++i) {
            const long double v = std::round(static_cast<long double>(a) * std::pow(ratio, static_cast<long double>(i)));
            xs.push_back(i + 1 == n ? b : static_cast<std::uint64_t>(v));
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return xs;
    }
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string item = detail::trim(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) xs.push_back(detail::parse_u64(item, "--x"));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return xs;
}

inline ZRule parse_z_rule(std::string_view spec) {
    const std::string s = detail::trim(spec);
    ZRule rule;
    if (s == "sqrt") {
        rule.kind = ZRule::Kind::Sqrt;
    } else if (s == "logx" || s == "log") {
        rule.kind = ZRule::Kind::LogX;
    } else {
        rule.kind = ZRule::Kind::Fixed;
        rule.fixed = detail::parse_u64(s.starts_with("fixed:") ? std::string_view(s).substr(6) : std::string_view(s), "--z");
        if (rule.fixed < 2) throw ConfigError("--z: fixed z must be >= 2");
    }
    return rule;
}

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("--format must be csv or json, got '" + std::string(s) + "'");
}

}  // namespace lpfsieve
