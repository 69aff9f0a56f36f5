#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "riskpf/io.hpp"
#include "riskpf/scenario.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string controller;
  std::string uncertainty;
  double epsilon = -1.0;
  std::int64_t seed = -1;
  int duration_steps = -1;
  std::string out_dir = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "key = value configuration file");
  cmd->add_option("--controller", args->controller, "rmpc or smpc")
      ->check(CLI::IsMember({"rmpc", "smpc"}));
  cmd->add_option("--epsilon", args->epsilon, "risk tolerance in Joules");
  cmd->add_option("--uncertainty", args->uncertainty, "low, medium or high")
      ->check(CLI::IsMember({"low", "medium", "high"}));
  cmd->add_option("--seed", args->seed, "base random seed");
  cmd->add_option("--duration-steps", args->duration_steps, "closed-loop steps");
  cmd->add_option("--out", args->out_dir, "output directory");
  cmd->add_option("--format", args->format, "trace file format")
      ->check(CLI::IsMember({"csv", "json"}));
}

riskpf::ScenarioConfig resolve(const CommonArgs& args) {
  riskpf::ScenarioConfig cfg;
  if (!args.config_path.empty()) riskpf::apply_config_file(args.config_path, &cfg);
  if (!args.controller.empty()) cfg.mode = *riskpf::parse_mode(args.controller);
  if (!args.uncertainty.empty()) cfg.uncertainty = *riskpf::parse_uncertainty(args.uncertainty);
  if (args.epsilon >= 0.0) cfg.epsilon = args.epsilon;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (args.duration_steps > 0) cfg.steps = args.duration_steps;
  return cfg;
}

int run_single(const CommonArgs& args) {
  const riskpf::ScenarioConfig cfg = resolve(args);
  const riskpf::ScenarioResult result = riskpf::run_scenario(cfg);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  if (args.format == "json") {
    riskpf::write_file(dir / "trace.json", riskpf::trace_to_json(result.trace));
  } else {
    riskpf::write_file(dir / "trace.csv", riskpf::trace_to_csv(result.trace));
  }
  riskpf::write_file(dir / "summary.json", riskpf::summary_to_json(result));

  std::printf("%s %s eps=%g: e_acc=%.3f d_min=%.3f collided=%s (%.2fs)\n",
              riskpf::to_string(cfg.mode), riskpf::to_string(cfg.uncertainty), cfg.epsilon,
              result.e_acc, result.d_min, result.collided ? "yes" : "no", result.wall_time_s);
  std::printf("wrote %s\n", dir.string().c_str());
  return result.collided ? 2 : 0;
}

int run_matrix_cmd(const CommonArgs& args, int threads) {
  const riskpf::ScenarioConfig base = resolve(args);
  const riskpf::MatrixResult matrix = riskpf::run_matrix(base, threads);
  riskpf::write_matrix_outputs(args.out_dir, matrix, args.format);

  std::fputs(riskpf::matrix_table_csv(matrix).c_str(), stdout);
  bool any_collision = false;
  for (const auto& c : matrix.cells) any_collision = any_collision || c.result.collided;
  std::printf("36 scenarios in %.1fs, collisions: %s; wrote %s\n", matrix.wall_time_s,
              any_collision ? "YES" : "none", args.out_dir.c_str());
  return any_collision ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-constrained path-following MPC simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a single closed-loop scenario");
  add_common(run, &run_args);

  CommonArgs matrix_args;
  int threads = 0;
  CLI::App* matrix = app.add_subcommand("matrix", "run the 36-scenario comparison");
  add_common(matrix, &matrix_args);
  matrix->add_option("--threads", threads, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_single(run_args);
    return run_matrix_cmd(matrix_args, threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
