#ifndef QSPLINE_IO_HPP
#define QSPLINE_IO_HPP

// Dataset ingestion (CSV / JSON), model documents and report serialization.

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qspline/oracle.hpp"
#include "qspline/spline.hpp"

namespace qspline::io {

using nlohmann::json;

/// Malformed input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Strict decimal parse: the whole field must be consumed and finite.
inline std::optional<double> parse_number(std::string_view field) {
    const std::string s = trim(field);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Comma-separated list of numbers, e.g. "-1,0,1".
inline std::vector<double> parse_number_list(std::string_view text, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto field = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        const auto v = parse_number(field);
        if (!v) throw ParseError(what + ": '" + std::string(field) + "' is not a finite number");
        out.push_back(*v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// %.17g: enough digits to round-trip any double.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct BoundaryFlags {
    std::optional<double> left;
    std::optional<double> right;
};

namespace detail {

inline KnotDataSet make_dataset(std::vector<double> x, std::vector<double> f, double left, double right) {
    try {
        return KnotDataSet(std::move(x), std::move(f), left, right);
    } catch (const InvalidDataError& e) {
        throw ParseError(e.what());
    }
}

}  // namespace detail

/// CSV with header `x,f`, one knot per row, already sorted. Boundary values
/// come from the flags.
inline KnotDataSet parse_dataset_csv(std::istream& in, const BoundaryFlags& flags) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<double> xs;
    std::vector<double> fs;
    std::vector<std::size_t> lines;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            std::string compact;
            for (char c : t)
                if (c != ' ' && c != '\t') compact += c;
            if (compact.rfind("\xEF\xBB\xBF", 0) == 0) compact.erase(0, 3);  // UTF-8 BOM
            if (compact != "x,f") throw ParseError("expected header 'x,f', found '" + t + "'", lineno);
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw ParseError("expected two comma-separated fields", lineno);
        }
        const auto x = parse_number(std::string_view(t).substr(0, comma));
        const auto f = parse_number(std::string_view(t).substr(comma + 1));
        if (!x || !f) throw ParseError("field is not a finite number", lineno);
        if (!xs.empty()) {
            if (*x == xs.back()) {
                throw ParseError("duplicate knot x = " + format_number(*x) + " (first seen on line " +
                                     std::to_string(lines.back()) + ")",
                                 lineno);
            }
            if (*x < xs.back()) throw ParseError("knots must be strictly increasing", lineno);
        }
        xs.push_back(*x);
        fs.push_back(*f);
        lines.push_back(lineno);
    }
    if (!header_seen) throw ParseError("empty dataset");
    if (xs.size() < 2) throw ParseError("at least two knots are required");
    if (!flags.left || !flags.right) throw ParseError("CSV datasets need --dq-left and --dq-right");
    return detail::make_dataset(std::move(xs), std::move(fs), *flags.left, *flags.right);
}

namespace detail {

inline double number_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

inline std::vector<double> number_array(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ParseError(where + ": '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ParseError(where + ": '" + key + "' must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline json parse_json(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace detail

/// {"knots": [...], "values": [...], "boundary": {"left": .., "right": ..}}.
/// Flags, when given, override the file's boundary values.
inline KnotDataSet parse_dataset_json(std::istream& in, const BoundaryFlags& flags = {}) {
    const json doc = detail::parse_json(in);
    auto knots = detail::number_array(doc, "knots", "dataset");
    auto values = detail::number_array(doc, "values", "dataset");
    double left = 0.0;
    double right = 0.0;
    if (flags.left && flags.right) {
        left = *flags.left;
        right = *flags.right;
    } else {
        if (!doc.contains("boundary")) throw ParseError("dataset: missing 'boundary'");
        left = flags.left.value_or(detail::number_field(doc.at("boundary"), "left", "dataset.boundary"));
        right = flags.right.value_or(detail::number_field(doc.at("boundary"), "right", "dataset.boundary"));
    }
    return detail::make_dataset(std::move(knots), std::move(values), left, right);
}

/// Sniffs the format: a leading '{' means JSON, anything else CSV.
inline KnotDataSet parse_dataset(std::istream& in, const BoundaryFlags& flags) {
    std::ostringstream buf;
    buf << in.rdbuf();
    std::istringstream text(buf.str());
    const auto first = buf.str().find_first_not_of(" \t\r\n");
    if (first != std::string::npos && buf.str()[first] == '{') return parse_dataset_json(text, flags);
    return parse_dataset_csv(text, flags);
}

inline KnotDataSet parse_dataset_file(const std::string& path, const BoundaryFlags& flags) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_dataset(in, flags);
}

// ---------------------------------------------------------------------------
// Model documents

inline constexpr int kModelFormatVersion = 1;

struct PieceRecord {
    double x_lo;
    double x_hi;
    std::array<double, 4> coeffs;

    friend bool operator==(const PieceRecord&, const PieceRecord&) = default;
};

struct ModelDocument {
    int format_version = kModelFormatVersion;
    double q = 1.0;
    std::vector<double> knots;
    std::vector<double> values;
    double left = 0.0;
    double right = 0.0;
    std::vector<double> moments;
    std::vector<PieceRecord> pieces;

    static ModelDocument from_model(const QSplineModel& m) {
        ModelDocument d;
        d.q = m.q().value();
        d.knots.assign(m.data().knots().begin(), m.data().knots().end());
        d.values.assign(m.data().values().begin(), m.data().values().end());
        d.left = m.data().d_left();
        d.right = m.data().d_right();
        d.moments = m.moments().mu;
        for (const auto& p : m.pieces()) {
            PieceRecord r{p.x_lo, p.x_hi, {}};
            for (std::size_t k = 0; k < 4; ++k) r.coeffs[k] = p.poly.coeff(k);
            d.pieces.push_back(r);
        }
        return d;
    }

    QSplineModel to_model() const {
        try {
            KnotDataSet data(knots, values, left, right);
            std::vector<SplinePiece> ps;
            for (const auto& r : pieces) {
                ps.push_back({r.x_lo, r.x_hi, Polynomial(std::vector<double>(r.coeffs.begin(), r.coeffs.end()))});
            }
            return QSplineModel::from_parts(QParam(q), std::move(data), Moments{moments}, std::move(ps));
        } catch (const InvalidDataError& e) {
            throw ParseError(std::string("model: ") + e.what());
        } catch (const DomainError& e) {
            throw ParseError(std::string("model: ") + e.what());
        }
    }

    json to_json() const {
        json j;
        j["format_version"] = format_version;
        j["q"] = q;
        j["knots"] = knots;
        j["values"] = values;
        j["boundary"] = {{"left", left}, {"right", right}};
        j["moments"] = moments;
        json ps = json::array();
        for (const auto& r : pieces) ps.push_back({{"x_lo", r.x_lo}, {"x_hi", r.x_hi}, {"coeffs", r.coeffs}});
        j["pieces"] = ps;
        return j;
    }

    static ModelDocument from_json(const json& j) {
        ModelDocument d;
        if (!j.is_object() || !j.contains("format_version") || !j.at("format_version").is_number_integer()) {
            throw ParseError("model: missing integer 'format_version'");
        }
        d.format_version = j.at("format_version").get<int>();
        if (d.format_version != kModelFormatVersion) {
            throw ParseError("model: unsupported format_version " + std::to_string(d.format_version));
        }
        d.q = detail::number_field(j, "q", "model");
        d.knots = detail::number_array(j, "knots", "model");
        d.values = detail::number_array(j, "values", "model");
        if (!j.contains("boundary")) throw ParseError("model: missing 'boundary'");
        d.left = detail::number_field(j.at("boundary"), "left", "model.boundary");
        d.right = detail::number_field(j.at("boundary"), "right", "model.boundary");
        d.moments = detail::number_array(j, "moments", "model");
        if (!j.contains("pieces") || !j.at("pieces").is_array()) throw ParseError("model: missing 'pieces' array");
        for (const auto& p : j.at("pieces")) {
            const auto coeffs = detail::number_array(p, "coeffs", "model.pieces");
            if (coeffs.size() != 4) throw ParseError("model.pieces: 'coeffs' must have exactly 4 entries");
            PieceRecord r{detail::number_field(p, "x_lo", "model.pieces"), detail::number_field(p, "x_hi", "model.pieces"),
                          {coeffs[0], coeffs[1], coeffs[2], coeffs[3]}};
            d.pieces.push_back(r);
        }
        return d;
    }

    friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

inline std::string serialize_model(const QSplineModel& m) { return ModelDocument::from_model(m).to_json().dump(2) + "\n"; }

inline QSplineModel parse_model(std::istream& in) { return ModelDocument::from_json(detail::parse_json(in)).to_model(); }

inline QSplineModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_model(in);
}

inline json report_to_json(const VerificationReport& r) {
    json j;
    j["q"] = r.q;
    j["tol"] = r.tol;
    j["pass"] = r.all_pass();
    json conds = json::array();
    for (const auto& c : r.conditions) {
        conds.push_back({{"kind", to_string(c.kind)},
                         {"knot", c.knot},
                         {"residual", c.residual},
                         {"scale", c.scale},
                         {"pass", c.pass}});
    }
    j["conditions"] = conds;
    j["moment_system"] = {{"residual", r.moment_residual}, {"bound", r.moment_bound}, {"pass", r.moment_pass}};
    if (r.oracle.available) {
        j["oracle"] = {{"available", true}, {"min_pivot", r.oracle.min_pivot}, {"max_coeff_diff", r.oracle.max_coeff_diff},
                       {"max_rel_coeff_diff", r.oracle.max_rel_coeff_diff}};
    } else {
        j["oracle"] = {{"available", false}};
    }
    if (const auto f = r.first_failure()) {
        j["first_failure"] = {{"kind", to_string(f->kind)}, {"knot", f->knot}, {"residual", f->residual}};
    }
    return j;
}

}  // namespace qspline::io

#endif  // QSPLINE_IO_HPP
