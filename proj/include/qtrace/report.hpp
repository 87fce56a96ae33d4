#pragma once

// Tabular output. CSV: header row, ',' separator, '.' decimal point, 12
// significant digits. JSON: {"meta": {...}, "rows": [{column: value}, ...]}
// with doubles at full precision.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qtrace/asymptotics.hpp"
#include "qtrace/error.hpp"
#include "qtrace/pairing.hpp"

namespace qtrace {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json meta = nlohmann::json::object();

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::logic_error("table row width does not match header");
        rows.push_back(std::move(row));
    }
};

inline std::string format_csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline void require_finite(const Table& t) {
    for (const auto& row : t.rows)
        for (const auto& cell : row)
            if (const double* x = std::get_if<double>(&cell); x && !std::isfinite(*x))
                throw numerical_error("non-finite value in output table");
}

} // namespace detail

inline std::string to_csv(const Table& t) {
    detail::require_finite(t);
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + detail::csv_escape(t.columns[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ",";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>)
                        out += format_csv_number(v);
                    else if constexpr (std::is_same_v<V, std::string>)
                        out += detail::csv_escape(v);
                    else
                        out += std::to_string(v);
                },
                row[i]);
        }
        out += "\n";
    }
    return out;
}

inline nlohmann::json to_json(const Table& t) {
    detail::require_finite(t);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto& v) { o[t.columns[i]] = v; }, row[i]);
        rows.push_back(std::move(o));
    }
    return {{"meta", t.meta}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Report tables

inline Table convergence_table(const ConvergenceReport& rep) {
    Table t;
    t.columns = {"r", "p", "normalized_trace", "limit", "gap", "gap_times_r"};
    for (const auto& row : rep.rows)
        t.add_row({std::int64_t{row.r}, std::int64_t{row.p}, row.normalized, row.limit, row.gap, row.gap_times_r});
    t.meta = {{"limit", rep.limit.value}, {"limit_error", rep.limit.error}, {"fitted_c", rep.fitted_c}};
    return t;
}

inline Table partition_table(const PartitionReport& rep) {
    Table t;
    t.columns = {"r",   "p",      "samples",         "min",          "max",
                 "uncovered_fraction", "blocks", "cells_per_block", "distinct_cells", "cell_identity"};
    t.add_row({std::int64_t{rep.r}, std::int64_t{2 * rep.r}, static_cast<std::int64_t>(rep.samples),
               std::int64_t{rep.min_count}, std::int64_t{rep.max_count}, rep.uncovered_fraction(),
               static_cast<std::int64_t>(rep.blocks), static_cast<std::int64_t>(rep.cells_per_block),
               static_cast<std::int64_t>(rep.distinct_cells), std::string(rep.cell_identity_holds ? "true" : "false")});
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, n] : rep.counts)
        counts[std::to_string(k)] = n;
    t.meta = {{"count_histogram", counts}, {"draws", rep.draws}};
    return t;
}

inline Table gram_table(const GramReport& rep) {
    Table t;
    t.columns = {"i", "j", "label_i", "label_j", "level_re", "level_im", "limit", "limit_error"};
    const std::size_t n = rep.labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::complex<double> lv = rep.r ? rep.level_gram[i][j] : std::complex<double>{0.0, 0.0};
            t.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), rep.labels[i], rep.labels[j],
                       lv.real(), lv.imag(), rep.limit_gram[i][j], rep.limit_error[i][j]});
        }
    }
    t.meta = {{"labels", rep.labels},
              {"limit_eigenvalues", rep.limit_eigenvalues},
              {"symmetry_defect", rep.symmetry_defect},
              {"psd_defect", rep.psd_defect}};
    if (rep.r) {
        t.meta["r"] = *rep.r;
        t.meta["p"] = 2 * *rep.r;
        t.meta["level_eigenvalues"] = rep.level_eigenvalues;
        t.meta["hermitian_defect"] = rep.hermitian_defect;
        t.meta["level_psd_defect"] = rep.level_psd_defect;
    }
    return t;
}

inline Table faithfulness_table(const FaithfulnessReport& rep) {
    Table t;
    t.columns = {"r", "p", "normalized_norm"};
    for (const auto& row : rep.rows)
        t.add_row({std::int64_t{row.r}, std::int64_t{row.p}, row.normalized});
    t.meta = {{"matrix", rep.matrix.to_string()},
              {"v", to_string(rep.v)},
              {"w", to_string(rep.w)},
              {"limit", rep.limit},
              {"tolerance", rep.tolerance}};
    t.meta["first_r"] = rep.first_r ? nlohmann::json(*rep.first_r) : nlohmann::json(nullptr);
    return t;
}

} // namespace qtrace
