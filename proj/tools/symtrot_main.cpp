// Command-line driver: time-evolution curves, Trotter-step sweeps, the
// strategy-by-mitigation fidelity table, readout calibration, and the
// peephole optimizer over the line-oriented circuit format.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "symtrot/experiments.hpp"

namespace fs = std::filesystem;
using namespace symtrot;

namespace {

struct CommonArgs {
  std::string strategy = "general";
  std::string steps = "100";
  double time = kPi;
  std::string backend = "analytic";
  std::string noise_path;
  std::string mitigation = "none";
  long shots = 8192;
  int repeats = 8;
  std::uint64_t seed = 2022;
  std::string out_dir = ".";
  std::string endianness = "site-major";
  std::string initial;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--strategy", a.strategy,
                  "naive | general | shallow_specific | shallow_shallow");
  cmd->add_option("--steps", a.steps, "Trotter step count, or comma list for sweep");
  cmd->add_option("--time", a.time, "total evolution time (default pi)");
  cmd->add_option("--backend", a.backend, "analytic | sampled-noiseless | sampled-noisy");
  cmd->add_option("--noise", a.noise_path, "noise model JSON file");
  cmd->add_option("--mitigation", a.mitigation, "none | qrem | qrem+zne | qrem+zne+twirl");
  cmd->add_option("--shots", a.shots, "shots per circuit (default 8192)");
  cmd->add_option("--repeats", a.repeats, "repeated tries to average (default 8)");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--endianness", a.endianness, "site-major | bit-major label rendering");
  cmd->add_option("--initial", a.initial, "initial state label, e.g. 011 or 010+110");
}

std::vector<int> parse_steps(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty --steps list");
  return out;
}

ExperimentConfig make_config(const CommonArgs& a, bool evolve_default_input) {
  ExperimentConfig cfg;
  cfg.strategy = strategy_from_name(a.strategy);
  cfg.steps = parse_steps(a.steps);
  cfg.total_time = a.time;
  cfg.backend = backend_from_name(a.backend);
  cfg.mitigation = mitigation_from_name(a.mitigation);
  cfg.shots = a.shots;
  cfg.repeats = a.repeats;
  cfg.seed = a.seed;
  cfg.endianness = a.endianness;
  cfg.initial_state = a.initial.empty() ? (evolve_default_input ? "010+110" : "011") : a.initial;
  if (!a.noise_path.empty()) {
    std::ifstream f(a.noise_path);
    if (!f) throw std::invalid_argument("cannot open noise file: " + a.noise_path);
    nlohmann::json j;
    f >> j;
    cfg.noise = NoiseModel::from_json(j);
    cfg.noise_explicit = true;
  }
  cfg.validate();
  return cfg;
}

int cmd_evolve(const CommonArgs& a) {
  ExperimentConfig cfg = make_config(a, true);
  EvolveResult r = run_evolve(cfg);
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "evolve.csv", evolve_csv(r));
  std::vector<std::pair<double, double>> sim, exact;
  for (const auto& p : r.points) {
    sim.push_back({p.t, p.simulated});
    exact.push_back({p.t, p.exact});
  }
  write_file(fs::path(a.out_dir) / "evolve.svg",
             svg_line_chart("return probability vs time",
                            {{"exact", exact}, {"simulated", sim}}, r.config));
  double maxdev = 0;
  for (const auto& p : r.points) maxdev = std::max(maxdev, std::abs(p.simulated - p.exact));
  std::cout << "evolve: wrote evolve.csv / evolve.svg  (max |sim - exact| = "
            << format_double(maxdev) << ")\n";
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  ExperimentConfig cfg = make_config(a, false);
  SweepResult r = run_sweep(cfg);
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "sweep.csv", sweep_csv(r));
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : r.rows) pts.push_back({double(row.steps), row.mean});
  write_file(fs::path(a.out_dir) / "sweep.svg",
             svg_line_chart("fidelity vs Trotter steps", {{a.strategy, pts}}, r.config));
  for (const auto& row : r.rows)
    std::cout << "steps " << row.steps << ": F = " << format_double(row.mean) << " +/- "
              << format_double(row.stddev) << "\n";
  return 0;
}

int cmd_table(const CommonArgs& a) {
  ExperimentConfig cfg = make_config(a, false);
  TableResult r = run_table(cfg);
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "table.json", table_json(r).dump(2) + "\n");
  write_file(fs::path(a.out_dir) / "table.txt", table_text(r));
  for (const auto& c : r.cells) {
    std::string name = std::string("expectations_") + strategy_name(c.strategy) + "_" +
                       mitigation_name(c.combo) + ".csv";
    for (auto& ch : name)
      if (ch == '+') ch = '-';
    write_file(fs::path(a.out_dir) / name,
               csv_comment_config(r.config) + c.expectations.to_csv());
  }
  std::cout << table_text(r);
  return 0;
}

int cmd_calibrate(const CommonArgs& a, int n_qubits) {
  ExperimentConfig cfg = make_config(a, false);
  NoiseModel noise = cfg.noise_explicit ? cfg.noise : NoiseModel::preset_default(n_qubits);
  if (cfg.backend == Backend::SampledNoiseless || cfg.backend == Backend::Analytic)
    noise = NoiseModel::ideal();
  if (noise.readout.empty()) noise.readout.assign(n_qubits, ReadoutConfusion{});
  AssignmentMatrix am = calibrate(noise, n_qubits, cfg.shots, cfg.seed);
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "assignment.csv",
             csv_comment_config(cfg.echo()) + am.to_csv());
  std::cout << "calibrate: wrote assignment.csv (condition number "
            << format_double(am.condition_number()) << ")\n";
  return 0;
}

int cmd_optimize(const std::string& in_path, const std::string& out_path, int max_rounds) {
  std::ifstream f(in_path);
  if (!f) throw std::invalid_argument("cannot open circuit file: " + in_path);
  std::stringstream ss;
  ss << f.rdbuf();
  Circuit c = from_text(ss.str());
  auto [opt, report] = optimize(c, max_rounds);
  if (!out_path.empty()) write_file(out_path, to_text(opt));
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale Trotterization workbench for the 3-site XXX Heisenberg chain"};
  app.require_subcommand(1);

  CommonArgs evolve_args, sweep_args, table_args, cal_args;
  auto* evolve = app.add_subcommand("evolve", "time-evolution curve against the exact propagator");
  add_common(evolve, evolve_args);
  auto* sweep = app.add_subcommand("sweep", "fidelity vs Trotter step count");
  add_common(sweep, sweep_args);
  sweep_args.steps = "1,2,3,4,5,6,7,8,9,10,20,30,40";
  auto* table = app.add_subcommand("table", "strategy x mitigation fidelity matrix");
  add_common(table, table_args);
  table_args.backend = "sampled-noisy";
  auto* cal = app.add_subcommand("calibrate", "measure the readout assignment matrix");
  int cal_qubits = 3;
  add_common(cal, cal_args);
  cal->add_option("--qubits", cal_qubits, "register size (default 3)");
  cal_args.backend = "sampled-noisy";

  std::string opt_in, opt_out;
  int opt_rounds = 8;
  auto* opt = app.add_subcommand("optimize", "peephole-optimize a circuit file");
  opt->add_option("--in", opt_in, "input circuit (text format)")->required();
  opt->add_option("--out", opt_out, "optimized circuit output path");
  opt->add_option("--max-rounds", opt_rounds, "fixpoint iteration cap (default 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(evolve_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (table->parsed()) return cmd_table(table_args);
    if (cal->parsed()) return cmd_calibrate(cal_args, cal_qubits);
    if (opt->parsed()) return cmd_optimize(opt_in, opt_out, opt_rounds);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
