#pragma once

/**
 * @file io.hpp
 * @brief JSON algebra/matrix formats, deterministic JSON text, CSV, atomic writes.
 */

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solvharm/config.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/numerics.hpp"

namespace solvharm {

using Json = nlohmann::ordered_json;

/// Malformed input file (bad JSON, wrong schema).
class FormatError : public Error {
public:
    using Error::Error;
};

inline Json algebra_to_json(const MetricLieAlgebra& g) {
    Json sc = Json::array();
    for (const auto& t : g.triples()) sc.push_back(Json::array({t.i, t.j, t.k, t.c}));
    Json out;
    out["dim"] = g.dim();
    out["structure_constants"] = std::move(sc);
    return out;
}

inline MetricLieAlgebra algebra_from_json(const Json& j,
                                          const Tolerances& tol = default_tolerances()) {
    if (!j.is_object()) throw FormatError("algebra: expected a JSON object");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw FormatError("algebra: missing integer field \"dim\"");
    const long long dim = j["dim"].get<long long>();
    if (dim < 1 || dim > 4096) throw FormatError("algebra: \"dim\" out of range");
    std::vector<StructureConstant> triples;
    if (j.contains("structure_constants")) {
        const auto& sc = j["structure_constants"];
        if (!sc.is_array()) throw FormatError("algebra: \"structure_constants\" must be an array");
        for (const auto& e : sc) {
            if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
                !e[1].is_number_integer() || !e[2].is_number_integer() || !e[3].is_number())
                throw FormatError("algebra: each structure constant must be [i, j, k, c]");
            triples.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(),
                               e[3].get<double>()});
        }
    }
    try {
        return MetricLieAlgebra::from_triples(static_cast<int>(dim), triples, tol);
    } catch (const DomainError& e) {
        throw FormatError(std::string("algebra: ") + e.what());
    }
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Either a bare array of rows or {"matrix": [[...], ...]}.
inline Matrix matrix_from_json(const Json& j) {
    const Json& rows = j.is_object() && j.contains("matrix") ? j["matrix"] : j;
    if (!rows.is_array() || rows.empty()) throw FormatError("matrix: expected an array of rows");
    const std::size_t n = rows.size();
    std::size_t cols = 0;
    for (const auto& r : rows) {
        if (!r.is_array()) throw FormatError("matrix: rows must be arrays");
        if (cols == 0) cols = r.size();
        if (r.size() != cols || cols == 0) throw FormatError("matrix: ragged rows");
    }
    Matrix m(n, cols);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            if (!rows[i][k].is_number()) throw FormatError("matrix: non-numeric entry");
            m(i, k) = rows[i][k].get<double>();
        }
    return m;
}

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void dump(const Json& j, std::ostringstream& os, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                dump(it.value(), os, indent, depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& e : j)
                if (e.is_structured()) flat = false;
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    dump(j[i], os, indent, depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump(j[i], os, indent, depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float: {
            const std::string s = format_double(j.get<double>());
            // non-finite values are not JSON; emit them as strings
            if (!std::isfinite(j.get<double>()))
                os << '"' << s << '"';
            else
                os << s;
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace detail

/// JSON text with fixed field order and 17 significant digits for floats.
inline std::string to_json_text(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::dump(j, os, indent, 0);
    os << "\n";
    return os.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(origin + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

/// Write via a sibling temp file and rename, so readers never see a partial file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto " + path + ": " + ec.message());
    }
}

/// CSV builder with a header row; numbers use the same formatting as JSON.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size()) throw DimensionError("csv: row width mismatch");
        rows_.push_back(cells);
    }

    void add_numeric_row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells) s.push_back(format_double(v));
        add_row(s);
    }

    std::string str() const {
        std::ostringstream os;
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
        return os.str();
    }

private:
    static void write_line(std::ostringstream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace solvharm
