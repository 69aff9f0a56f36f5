#pragma once

#include <filesystem>
#include <string>

#include "riskpf/scenario.hpp"

namespace riskpf {

// Trace CSV: one row per closed-loop step with the columns
// k,t_s,ego_c1,ego_c2,ego_theta,ego_v_applied,lambda,ref_c1,ref_c2,ref_theta,
// obj_c1,obj_c2,obj_theta,obj_v,risk_step,err_norm,feasible
std::string trace_to_csv(const std::vector<TraceRow>& trace);
std::vector<TraceRow> parse_trace_csv(const std::string& csv);

// Trace as a JSON array of row objects (same fields as the CSV columns).
std::string trace_to_json(const std::vector<TraceRow>& trace);

// Run summary: e_acc, d_min, collided, seed and an echo of the resolved config.
std::string summary_to_json(const ScenarioResult& result);

// Results table in the two-block layout: one row per (controller, epsilon), an
// (e_acc, d_min) column pair per uncertainty level.
std::string matrix_table_csv(const MatrixResult& matrix);

// Long-form listing: one row per cell with metrics, collision flag and seed.
std::string matrix_cells_csv(const MatrixResult& matrix);

// Key = value configuration file; unknown keys are an error. Keys mirror the
// ScenarioConfig field names (see README). Lines starting with '#' are comments.
void apply_config_file(const std::filesystem::path& file, ScenarioConfig* cfg);
void apply_config_line(const std::string& key, const std::string& value, ScenarioConfig* cfg);

void write_file(const std::filesystem::path& file, const std::string& content);
std::string read_file(const std::filesystem::path& file);

// File-name stem for one matrix cell, e.g. "smpc_low_eps500".
std::string cell_stem(const MatrixCell& cell);

// Writes matrix_table.csv, matrix_cells.csv and per-cell trace + summary files.
void write_matrix_outputs(const std::filesystem::path& dir, const MatrixResult& matrix,
                          const std::string& trace_format);

}  // namespace riskpf
