#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prefender/attack.hpp"
#include "prefender/config.hpp"
#include "prefender/report.hpp"
#include "prefender/selftest.hpp"
#include "prefender/workload.hpp"

namespace {

using namespace prefender;

int write_out(const std::string& data, const std::string& path) {
  if (path.empty()) {
    std::cout << data;
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return 1;
  }
  f << data;
  return 0;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "jsonl") return ReportFormat::JSON_LINES;
  if (s == "csv") return ReportFormat::CSV;
  throw CLI::ValidationError("--format", "expected jsonl or csv");
}

void apply_defense_preset(SimConfig& cfg, const std::string& preset) {
  cfg.st.enabled = cfg.at.enabled = cfg.rp.enabled = false;
  if (preset == "none") return;
  if (preset == "st") { cfg.st.enabled = true; return; }
  if (preset == "at") { cfg.at.enabled = true; return; }
  if (preset == "st_at") { cfg.st.enabled = cfg.at.enabled = true; return; }
  if (preset == "at_rp") { cfg.at.enabled = cfg.rp.enabled = true; return; }
  if (preset == "full") { cfg.st.enabled = cfg.at.enabled = cfg.rp.enabled = true; return; }
  throw CLI::ValidationError("--defense", "expected none|st|at|st_at|at_rp|full");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prefender: cache/prefetcher simulator with a prefetching side-channel defense"};
  app.require_subcommand(1);

  // attack
  auto* atk = app.add_subcommand("attack", "run an attack scenario from a config file");
  std::string atk_config, atk_out, atk_format = "jsonl";
  int64_t atk_trials = -1;
  atk->add_option("--config", atk_config, "scenario config file")->required();
  atk->add_option("--trials", atk_trials, "override [attack] trials");
  atk->add_option("--out", atk_out, "output path (default stdout)");
  atk->add_option("--format", atk_format, "jsonl or csv")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "run a benign workload");
  std::string b_workload = "sequential", b_defense = "full", b_base = "none";
  std::string b_config, b_out, b_format = "jsonl";
  uint64_t b_length = 100000, b_stride = 256, b_seed = 1;
  bench->add_option("--workload", b_workload, "sequential|strided|random|dep_chain|nested_2d")
      ->capture_default_str();
  bench->add_option("--defense", b_defense, "none|st|at|st_at|at_rp|full")->capture_default_str();
  bench->add_option("--base-prefetcher", b_base, "none|tagged|stride")->capture_default_str();
  bench->add_option("--length", b_length, "number of loads")->capture_default_str();
  bench->add_option("--stride", b_stride, "stride in bytes for strided workloads");
  bench->add_option("--seed", b_seed, "workload seed");
  bench->add_option("--config", b_config, "base config file (optional)");
  bench->add_option("--out", b_out, "output path (default stdout)");
  bench->add_option("--format", b_format, "jsonl or csv")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "rerun a scenario across parameter values");
  std::string s_param, s_values, s_config, s_out;
  sweep->add_option("--param", s_param, "dotted config key, e.g. at.buffer_count")->required();
  sweep->add_option("--values", s_values, "comma-separated values")->required();
  sweep->add_option("--config", s_config, "scenario config file")->required();
  sweep->add_option("--out", s_out, "output path (default stdout)");

  // selftest
  auto* self = app.add_subcommand("selftest", "run the built-in invariant checks");

  if (argc <= 1) {
    std::cout << app.help();
    return 2;
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (*atk) {
      SimConfig cfg = load_config_file(atk_config);
      uint32_t trials = atk_trials > 0 ? static_cast<uint32_t>(atk_trials) : cfg.attack.trials;
      ScenarioRun run = run_scenario(cfg.attack, cfg, trials);
      return write_out(emit_report(run.report, parse_format(atk_format)), atk_out);
    }
    if (*bench) {
      SimConfig cfg = b_config.empty() ? SimConfig{} : load_config_file(b_config);
      apply_defense_preset(cfg, b_defense);
      apply_config_key(cfg, "prefetcher.base", b_base);
      apply_config_key(cfg, "workload.kind", b_workload);
      cfg.workload.length = b_length;
      cfg.workload.stride_bytes = b_stride;
      cfg.workload.seed = b_seed;
      WorkloadRun run = run_workload(cfg.workload, cfg);
      return write_out(emit_report(run.report, parse_format(b_format)), b_out);
    }
    if (*sweep) {
      SimConfig base_cfg = load_config_file(s_config);
      std::string out;
      std::stringstream ss(s_values);
      std::string v;
      while (std::getline(ss, v, ',')) {
        SimConfig cfg = base_cfg;
        apply_config_key(cfg, s_param, v);
        ScenarioRun run = run_scenario(cfg.attack, cfg, cfg.attack.trials);
        std::string line = emit_report(run.report, ReportFormat::JSON_LINES);
        // keep only the summary row per value, tagged with the swept value
        std::string summary = line.substr(0, line.find('\n'));
        summary.insert(summary.size() - 1, ",\"sweep_param\":\"" + s_param +
                                               "\",\"sweep_value\":\"" + v + "\"");
        out += summary + "\n";
      }
      return write_out(out, s_out);
    }
    if (*self) {
      bool ok = run_selftest(std::cout);
      std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
