#include "riskpf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace riskpf {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

constexpr const char* kTraceHeader =
    "k,t_s,ego_c1,ego_c2,ego_theta,ego_v_applied,lambda,ref_c1,ref_c2,ref_theta,"
    "obj_c1,obj_c2,obj_theta,obj_v,risk_step,err_norm,feasible";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

nlohmann::ordered_json row_json(const TraceRow& r) {
  return {{"k", r.k},
          {"t_s", r.t_s},
          {"ego_c1", r.ego_c1},
          {"ego_c2", r.ego_c2},
          {"ego_theta", r.ego_theta},
          {"ego_v_applied", r.ego_v_applied},
          {"lambda", r.lambda},
          {"ref_c1", r.ref_c1},
          {"ref_c2", r.ref_c2},
          {"ref_theta", r.ref_theta},
          {"obj_c1", r.obj_c1},
          {"obj_c2", r.obj_c2},
          {"obj_theta", r.obj_theta},
          {"obj_v", r.obj_v},
          {"risk_step", r.risk_step},
          {"err_norm", r.err_norm},
          {"feasible", r.feasible}};
}

nlohmann::ordered_json config_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["goal_c1"] = c.goal.c1;
  j["goal_c2"] = c.goal.c2;
  j["goal_theta"] = c.goal.theta;
  j["curvature"] = c.curvature;
  j["lambda0"] = c.lambda0;
  j["lambda_g"] = c.lambda_g;
  j["ego_c1"] = c.ego_start.c1;
  j["ego_c2"] = c.ego_start.c2;
  j["ego_theta"] = c.ego_start.theta;
  j["ego_radius"] = c.ego_radius;
  j["ego_mass"] = c.ego_mass;
  j["v_ref"] = c.v_ref;
  j["object_c1"] = c.object_start.c1;
  j["object_c2"] = c.object_start.c2;
  j["object_theta"] = c.object_start.theta;
  j["object_radius"] = c.object_radius;
  j["object_mass"] = c.object_mass;
  j["object_v"] = c.object_input.v;
  j["object_omega"] = c.object_input.omega;
  j["object_v_lo"] = c.object_v_lo;
  j["object_v_hi"] = c.object_v_hi;
  j["sigma0_c1"] = c.sigma0[0];
  j["sigma0_c2"] = c.sigma0[1];
  j["sigma0_v"] = c.sigma0[2];
  j["uncertainty"] = to_string(c.uncertainty);
  const UncertaintyGrowth g = c.growth();
  j["growth_sigma"] = g.q_diag[0];
  j["growth_dq"] = g.dq.c1;
  j["growth_dv"] = g.dv;
  j["controller"] = to_string(c.mode);
  j["epsilon"] = c.epsilon;
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["mcs_samples"] = c.mcs_samples;
  j["grid_points"] = c.grid_points;
  j["w0"] = c.weight[0][0];
  j["w1"] = c.weight[1][1];
  j["w2"] = c.weight[2][2];
  j["w3"] = c.weight[3][3];
  j["v_lo"] = c.bounds.v_lo;
  j["v_hi"] = c.bounds.v_hi;
  j["omega_lo"] = c.bounds.omega_lo;
  j["omega_hi"] = c.bounds.omega_hi;
  j["u2_lo"] = c.bounds.u2_lo;
  j["u2_hi"] = c.bounds.u2_hi;
  j["population"] = c.population;
  j["iterations"] = c.iterations;
  j["polish"] = c.polish;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::string out(kTraceHeader);
  out.push_back('\n');
  for (const TraceRow& r : trace) {
    out += std::to_string(r.k);
    out += ',' + fmt(r.t_s);
    out += ',' + fmt(r.ego_c1) + ',' + fmt(r.ego_c2) + ',' + fmt(r.ego_theta);
    out += ',' + fmt(r.ego_v_applied);
    out += ',' + fmt(r.lambda);
    out += ',' + fmt(r.ref_c1) + ',' + fmt(r.ref_c2) + ',' + fmt(r.ref_theta);
    out += ',' + fmt(r.obj_c1) + ',' + fmt(r.obj_c2) + ',' + fmt(r.obj_theta);
    out += ',' + fmt(r.obj_v);
    out += ',' + fmt(r.risk_step) + ',' + fmt(r.err_norm);
    out += r.feasible ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<TraceRow> parse_trace_csv(const std::string& csv) {
  std::istringstream ss(csv);
  std::string line;
  if (!std::getline(ss, line) || line != kTraceHeader) {
    throw std::runtime_error("parse_trace_csv: unexpected header");
  }
  std::vector<TraceRow> out;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 17) throw std::runtime_error("parse_trace_csv: bad row");
    TraceRow r;
    r.k = std::stoi(f[0]);
    r.t_s = std::stod(f[1]);
    r.ego_c1 = std::stod(f[2]);
    r.ego_c2 = std::stod(f[3]);
    r.ego_theta = std::stod(f[4]);
    r.ego_v_applied = std::stod(f[5]);
    r.lambda = std::stod(f[6]);
    r.ref_c1 = std::stod(f[7]);
    r.ref_c2 = std::stod(f[8]);
    r.ref_theta = std::stod(f[9]);
    r.obj_c1 = std::stod(f[10]);
    r.obj_c2 = std::stod(f[11]);
    r.obj_theta = std::stod(f[12]);
    r.obj_v = std::stod(f[13]);
    r.risk_step = std::stod(f[14]);
    r.err_norm = std::stod(f[15]);
    r.feasible = f[16] == "1";
    out.push_back(r);
  }
  return out;
}

std::string trace_to_json(const std::vector<TraceRow>& trace) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TraceRow& r : trace) arr.push_back(row_json(r));
  return arr.dump(2) + "\n";
}

std::string summary_to_json(const ScenarioResult& result) {
  nlohmann::ordered_json j;
  j["e_acc"] = result.e_acc;
  j["d_min"] = result.d_min;
  j["collided"] = result.collided;
  j["seed"] = result.config.seed;
  j["steps"] = static_cast<int>(result.trace.size());
  j["wall_time_s"] = result.wall_time_s;
  j["config"] = config_json(result.config);
  return j.dump(2) + "\n";
}

std::string matrix_table_csv(const MatrixResult& matrix) {
  std::string out =
      "controller,epsilon,e_acc_low,d_min_low,e_acc_medium,d_min_medium,e_acc_high,d_min_high\n";
  for (ControllerMode mode : {ControllerMode::kRobust, ControllerMode::kStochastic}) {
    for (double eps : kEpsilonGrid) {
      out += to_string(mode);
      out += ',' + fmt(eps);
      for (UncertaintyLevel unc : kUncertaintyLevels) {
        const MatrixCell& c = matrix.cell(mode, unc, eps);
        out += ',' + fmt(c.result.e_acc) + ',' + fmt(c.result.d_min);
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::string matrix_cells_csv(const MatrixResult& matrix) {
  std::string out = "controller,uncertainty,epsilon,e_acc,d_min,collided,seed,steps,wall_time_s\n";
  for (const MatrixCell& c : matrix.cells) {
    out += to_string(c.mode);
    out += ',';
    out += to_string(c.uncertainty);
    out += ',' + fmt(c.epsilon);
    out += ',' + fmt(c.result.e_acc) + ',' + fmt(c.result.d_min);
    out += c.result.collided ? ",1" : ",0";
    out += ',' + std::to_string(c.seed);
    out += ',' + std::to_string(c.result.trace.size());
    out += ',' + fmt(c.result.wall_time_s);
    out.push_back('\n');
  }
  return out;
}

void apply_config_line(const std::string& key, const std::string& value, ScenarioConfig* cfg) {
  const auto num = [&]() { return std::stod(value); };
  const auto integer = [&]() { return std::stoi(value); };

  // Engaging any growth_* key replaces the level preset; unset components stay zero.
  const auto growth = [&]() -> UncertaintyGrowth& {
    if (!cfg->growth_override) cfg->growth_override = UncertaintyGrowth{};
    return *cfg->growth_override;
  };

  if (key == "goal_c1") cfg->goal.c1 = num();
  else if (key == "goal_c2") cfg->goal.c2 = num();
  else if (key == "goal_theta") cfg->goal.theta = num();
  else if (key == "curvature") cfg->curvature = num();
  else if (key == "lambda0") cfg->lambda0 = num();
  else if (key == "lambda_g") cfg->lambda_g = num();
  else if (key == "ego_c1") cfg->ego_start.c1 = num();
  else if (key == "ego_c2") cfg->ego_start.c2 = num();
  else if (key == "ego_theta") cfg->ego_start.theta = num();
  else if (key == "ego_radius") cfg->ego_radius = num();
  else if (key == "ego_mass") cfg->ego_mass = num();
  else if (key == "v_ref") cfg->v_ref = num();
  else if (key == "object_c1") cfg->object_start.c1 = num();
  else if (key == "object_c2") cfg->object_start.c2 = num();
  else if (key == "object_theta") cfg->object_start.theta = num();
  else if (key == "object_radius") cfg->object_radius = num();
  else if (key == "object_mass") cfg->object_mass = num();
  else if (key == "object_v") cfg->object_input.v = num();
  else if (key == "object_omega") cfg->object_input.omega = num();
  else if (key == "object_v_lo") cfg->object_v_lo = num();
  else if (key == "object_v_hi") cfg->object_v_hi = num();
  else if (key == "sigma0_c1") cfg->sigma0[0] = num();
  else if (key == "sigma0_c2") cfg->sigma0[1] = num();
  else if (key == "sigma0_v") cfg->sigma0[2] = num();
  else if (key == "uncertainty") {
    const auto level = parse_uncertainty(value);
    if (!level) throw std::runtime_error("config: bad uncertainty '" + value + "'");
    cfg->uncertainty = *level;
  } else if (key == "growth_sigma") {
    const double q = num();
    growth().q_diag = {q, q, q};
  } else if (key == "growth_dq") {
    const double d = num();
    growth().dq = {d, d};
  } else if (key == "growth_dv") growth().dv = num();
  else if (key == "controller") {
    const auto mode = parse_mode(value);
    if (!mode) throw std::runtime_error("config: bad controller '" + value + "'");
    cfg->mode = *mode;
  } else if (key == "epsilon") cfg->epsilon = num();
  else if (key == "dt") cfg->dt = num();
  else if (key == "horizon") cfg->horizon = integer();
  else if (key == "mcs_samples") cfg->mcs_samples = integer();
  else if (key == "grid_points") cfg->grid_points = integer();
  else if (key == "w0") cfg->weight[0][0] = num();
  else if (key == "w1") cfg->weight[1][1] = num();
  else if (key == "w2") cfg->weight[2][2] = num();
  else if (key == "w3") cfg->weight[3][3] = num();
  else if (key == "v_lo") cfg->bounds.v_lo = num();
  else if (key == "v_hi") cfg->bounds.v_hi = num();
  else if (key == "omega_lo") cfg->bounds.omega_lo = num();
  else if (key == "omega_hi") cfg->bounds.omega_hi = num();
  else if (key == "u2_lo") cfg->bounds.u2_lo = num();
  else if (key == "u2_hi") cfg->bounds.u2_hi = num();
  else if (key == "population") cfg->population = integer();
  else if (key == "iterations") cfg->iterations = integer();
  else if (key == "polish") cfg->polish = integer() != 0;
  else if (key == "steps") cfg->steps = integer();
  else if (key == "seed") cfg->seed = std::stoull(value);
  else throw std::runtime_error("config: unknown key '" + key + "'");
}

void apply_config_file(const std::filesystem::path& file, ScenarioConfig* cfg) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("config: cannot open " + file.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::runtime_error("config: line " + std::to_string(line_no) + " is not key = value");
      }
      continue;
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
    }
    apply_config_line(key, value, cfg);
  }
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << content;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cell_stem(const MatrixCell& cell) {
  std::string s = to_string(cell.mode);
  s += '_';
  s += to_string(cell.uncertainty);
  s += "_eps" + std::to_string(static_cast<long>(cell.epsilon));
  return s;
}

void write_matrix_outputs(const std::filesystem::path& dir, const MatrixResult& matrix,
                          const std::string& trace_format) {
  std::filesystem::create_directories(dir);
  write_file(dir / "matrix_table.csv", matrix_table_csv(matrix));
  write_file(dir / "matrix_cells.csv", matrix_cells_csv(matrix));
  for (const MatrixCell& c : matrix.cells) {
    const std::string stem = cell_stem(c);
    if (trace_format == "json") {
      write_file(dir / ("trace_" + stem + ".json"), trace_to_json(c.result.trace));
    } else {
      write_file(dir / ("trace_" + stem + ".csv"), trace_to_csv(c.result.trace));
    }
    write_file(dir / ("summary_" + stem + ".json"), summary_to_json(c.result));
  }
}

}  // namespace riskpf
