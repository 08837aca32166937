// RFC-4180-style CSV writers: header row, '.' decimal point regardless of
// locale (std::to_chars), fixed column order. Schemas are documented in the
// README and versioned through kOutputSchemaVersion.

#pragma once

#include "tgf/montecarlo.hpp"
#include "tgf/sde.hpp"

#include <charconv>
#include <fstream>
#include <string>

namespace tgf {

inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, ptr);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns) : os_(path) {
        if (!os_.good())
            throw std::runtime_error("cannot open output file: " + path);
        for (size_t i = 0; i < columns.size(); ++i)
            os_ << (i ? "," : "") << columns[i];
        os_ << "\n";
        ncols_ = columns.size();
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != ncols_)
            throw std::runtime_error("CSV row width mismatch");
        for (size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? "," : "") << cells[i];
        os_ << "\n";
    }

  private:
    std::ofstream os_;
    size_t ncols_ = 0;
};

inline const std::vector<std::string>& ledger_columns() {
    static const std::vector<std::string> cols = {"t",        "v_sq",     "w_sq",     "d_sq",   "a_sq",
                                                  "a4_4",     "w14_4",    "int_d_sq", "int_a4_4", "int_a_sq",
                                                  "int_w14_4", "residual", "stopped"};
    return cols;
}

inline void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
    CsvWriter w(path, ledger_columns());
    for (const auto& r : ledger.rows)
        w.row({format_double(r.t), format_double(r.v_sq), format_double(r.w_sq), format_double(r.d_sq),
               format_double(r.a_sq), format_double(r.a4_4), format_double(r.w14_4), format_double(r.int_d_sq),
               format_double(r.int_a4_4), format_double(r.int_a_sq), format_double(r.int_w14_4),
               format_double(r.residual), r.stopped ? "1" : "0"});
}

inline void write_snapshots_csv(const std::string& path,
                                const std::vector<std::pair<double, Vector>>& snapshots) {
    if (snapshots.empty())
        return;
    std::vector<std::string> cols = {"t"};
    for (Eigen::Index j = 0; j < snapshots.front().second.size(); ++j)
        cols.push_back("c" + std::to_string(j));
    CsvWriter w(path, cols);
    for (const auto& [t, c] : snapshots) {
        std::vector<std::string> cells = {format_double(t)};
        for (Eigen::Index j = 0; j < c.size(); ++j)
            cells.push_back(format_double(c[j]));
        w.row(cells);
    }
}

inline void write_path_summaries_csv(const std::string& path, const std::vector<PathSummary>& paths) {
    CsvWriter w(path, {"path", "seed", "sup_v_sq", "int_d_sq", "int_a4_4", "sup_w", "exp_arg", "blowup"});
    for (const auto& p : paths)
        w.row({std::to_string(p.index), std::to_string(p.seed), format_double(p.sup_v_sq),
               format_double(p.int_d_sq), format_double(p.int_a4_4), format_double(p.sup_w),
               format_double(p.exp_arg), p.blowup ? "1" : "0"});
}

inline void write_level_distances_csv(const std::string& path, const std::vector<LevelDistance>& rows) {
    CsvWriter w(path, {"n_coarse", "n_fine", "e_sup_v_sq", "e_int_v_sq"});
    for (const auto& r : rows)
        w.row({std::to_string(r.n_coarse), std::to_string(r.n_fine), format_double(r.e_sup_v_sq),
               format_double(r.e_int_v_sq)});
}

}  // namespace tgf
