#pragma once

// JSON files for sets, functions, run configurations and reports.

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "capint/ensemble.hpp"

namespace capint {

using Json = nlohmann::ordered_json;

// Malformed input; the message names the offending field or line.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io {

inline Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size() + 1) && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(origin + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": malformed JSON");
    }
}

inline Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot write");
    out << text;
}

inline void require_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw InputError(where + ": unknown field '" + key + "'");
    }
}

inline const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.contains(name)) throw InputError(where + ": missing field '" + name + "'");
    return j.at(name);
}

inline int int_field(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    if (!v.is_number_integer()) throw InputError(where + ": field '" + name + "' must be an integer");
    return v.get<int>();
}

inline double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw InputError(where + ": expected a number");
    return v.get<double>();
}

inline void check_shape(int n, int L, const std::string& where) {
    try {
        require_grid_shape(n, L);
    } catch (const std::domain_error& e) {
        throw InputError(where + ": " + e.what());
    }
}

}  // namespace io

// ---------------------------------------------------------------------------
// Sets and functions

inline Json to_json(const GridSet& e) {
    Json cells = Json::array();
    for (std::size_t i : e.cells()) {
        const Index k = index_vector(i, e.dimension(), e.resolution());
        Json v = Json::array();
        for (int d = 0; d < e.dimension(); ++d) v.push_back(k[d]);
        cells.push_back(v);
    }
    return Json{{"n", e.dimension()}, {"L", e.resolution()}, {"cells", cells}};
}

inline GridSet set_from_json(const Json& j, const std::string& where = "set") {
    io::require_fields(j, {"n", "L", "cells"}, where);
    const int n = io::int_field(j, "n", where), L = io::int_field(j, "L", where);
    io::check_shape(n, L, where);
    const Json& cells = io::field(j, "cells", where);
    if (!cells.is_array()) throw InputError(where + ": field 'cells' must be a list");
    GridSet e(n, L);
    const long side = 1L << L;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string at = where + ": cells[" + std::to_string(c) + "]";
        const Json& v = cells[c];
        if (!v.is_array() || v.size() != static_cast<std::size_t>(n)) {
            throw InputError(at + ": expected an index vector of length " + std::to_string(n));
        }
        Index k{0, 0};
        for (int d = 0; d < n; ++d) {
            if (!v[d].is_number_integer()) throw InputError(at + ": indices must be integers");
            const long x = v[d].get<long>();
            if (x < 0 || x >= side) throw InputError(at + ": index out of range for L = " + std::to_string(L));
            k[d] = static_cast<std::uint32_t>(x);
        }
        e.insert(linear_index(k, n, L));
    }
    return e;
}

inline Json to_json(const StepFunction& f) {
    return Json{{"n", f.dimension()}, {"L", f.resolution()}, {"values", f.values()}};
}

inline StepFunction function_from_json(const Json& j, const std::string& where = "function") {
    io::require_fields(j, {"n", "L", "values"}, where);
    const int n = io::int_field(j, "n", where), L = io::int_field(j, "L", where);
    io::check_shape(n, L, where);
    const Json& values = io::field(j, "values", where);
    if (!values.is_array()) throw InputError(where + ": field 'values' must be a list");
    if (values.size() != cell_count(n, L)) {
        throw InputError(where + ": expected " + std::to_string(cell_count(n, L)) + " values, found " +
                         std::to_string(values.size()));
    }
    std::vector<double> v(values.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = where + ": values[" + std::to_string(i) + "]";
        v[i] = io::number(values[i], at);
        if (!std::isfinite(v[i])) throw InputError(at + ": must be finite");
        if (v[i] < 0.0) throw InputError(at + ": negative value");
    }
    return StepFunction(n, L, std::move(v));
}

inline GridSet read_set(const std::string& path) { return set_from_json(io::read_file(path), path); }
inline StepFunction read_function(const std::string& path) { return function_from_json(io::read_file(path), path); }

inline Json to_json(const Interval& v) { return Json{{"lo", v.lo}, {"hi", v.hi}}; }

// ---------------------------------------------------------------------------
// Parameters

inline Json to_json(const CheckParams& q) {
    Json j{{"n", q.n}, {"L", q.L}, {"beta", q.beta}, {"gamma", q.gamma}, {"p", q.p}, {"alpha", q.alpha}, {"s", q.s}};
    j["t"] = q.t ? Json(*q.t) : Json(nullptr);
    j["form"] = q.form ? Json(to_string(*q.form)) : Json(nullptr);
    j["tolerance"] = q.tolerance ? Json(*q.tolerance) : Json(nullptr);
    return j;
}

inline CheckParams params_from_json(const Json& j, const std::string& where = "params") {
    io::require_fields(j, {"n", "L", "beta", "gamma", "p", "alpha", "s", "t", "form", "tolerance"}, where);
    CheckParams q;
    if (j.contains("n")) q.n = io::int_field(j, "n", where);
    if (j.contains("L")) q.L = io::int_field(j, "L", where);
    auto real = [&](const char* name, double& out) {
        if (j.contains(name)) out = io::number(j.at(name), where + "." + name);
    };
    real("beta", q.beta);
    real("gamma", q.gamma);
    real("p", q.p);
    real("alpha", q.alpha);
    real("s", q.s);
    if (j.contains("t") && !j.at("t").is_null()) q.t = io::number(j.at("t"), where + ".t");
    if (j.contains("tolerance") && !j.at("tolerance").is_null()) {
        q.tolerance = io::number(j.at("tolerance"), where + ".tolerance");
    }
    if (j.contains("form") && !j.at("form").is_null()) {
        if (!j.at("form").is_string()) throw InputError(where + ".form: expected a string");
        try {
            q.form = parse_form(j.at("form").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InputError(where + ".form: " + e.what());
        }
    }
    return q;
}

inline Json to_json(const InequalityCheck& c) {
    Json j;
    j["spec"] = to_string(c.id);
    j["seed"] = c.seed;
    j["lhs"] = to_json(c.lhs);
    j["rhs"] = to_json(c.rhs);
    j["constant"] = c.constant;
    j["ratio"] = to_json(c.ratio);
    j["verdict"] = to_string(c.verdict);
    j["threshold"] = c.threshold;
    j["evaluations"] = c.evaluations;
    j["failing"] = c.failing;
    j["inconclusive"] = c.inconclusive;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

// ---------------------------------------------------------------------------
// SVG histogram of upper ratio endpoints

inline std::string ratio_histogram_svg(const std::string& title, const std::vector<InequalityCheck>& checks,
                                       int bins = 40) {
    double top = 0.0;
    for (const auto& c : checks) {
        if (std::isfinite(c.ratio.hi)) top = std::max(top, c.ratio.hi);
    }
    top = std::max(top, 1.0);
    std::vector<std::size_t> count(bins, 0);
    for (const auto& c : checks) {
        const double r = std::isfinite(c.ratio.hi) ? c.ratio.hi : top;
        count[std::min<int>(bins - 1, static_cast<int>(r / top * bins))]++;
    }
    const std::size_t peak = std::max<std::size_t>(1, *std::max_element(count.begin(), count.end()));
    const double W = 640, H = 320, pad = 40, bw = (W - 2 * pad) / bins;
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << ": lhs/(C rhs), " << checks.size() << " instances</text>\n";
    for (int b = 0; b < bins; ++b) {
        const double h = (H - 2 * pad) * static_cast<double>(count[b]) / static_cast<double>(peak);
        s << "<rect x=\"" << pad + b * bw << "\" y=\"" << H - pad - h << "\" width=\"" << bw * 0.9 << "\" height=\"" << h
          << "\" fill=\"steelblue\"/>\n";
    }
    const double one = pad + (W - 2 * pad) / top;
    s << "<line x1=\"" << one << "\" y1=\"" << pad << "\" x2=\"" << one << "\" y2=\"" << H - pad
      << "\" stroke=\"firebrick\" stroke-dasharray=\"4\"/>\n";
    s << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";
    s << "<text x=\"" << W - pad << "\" y=\"" << H - 10 << "\" font-family=\"sans-serif\" font-size=\"12\">" << top
      << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace capint
