#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symtrot/circuit.hpp"
#include "symtrot/executor.hpp"
#include "symtrot/mitigation.hpp"
#include "symtrot/model.hpp"
#include "symtrot/noise.hpp"
#include "symtrot/tomography.hpp"
#include "symtrot/transpile.hpp"
#include "symtrot/trotter.hpp"

namespace symtrot {

enum class Backend { Analytic, SampledNoiseless, SampledNoisy };
enum class MitigationCombo { None, Qrem, QremZne, QremZneTwirl };

inline const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Analytic: return "analytic";
    case Backend::SampledNoiseless: return "sampled-noiseless";
    case Backend::SampledNoisy: return "sampled-noisy";
  }
  return "?";
}
inline Backend backend_from_name(const std::string& s) {
  if (s == "analytic") return Backend::Analytic;
  if (s == "sampled-noiseless") return Backend::SampledNoiseless;
  if (s == "sampled-noisy") return Backend::SampledNoisy;
  throw std::invalid_argument("unknown backend: " + s);
}

inline const char* mitigation_name(MitigationCombo m) {
  switch (m) {
    case MitigationCombo::None: return "none";
    case MitigationCombo::Qrem: return "qrem";
    case MitigationCombo::QremZne: return "qrem+zne";
    case MitigationCombo::QremZneTwirl: return "qrem+zne+twirl";
  }
  return "?";
}
inline MitigationCombo mitigation_from_name(const std::string& s) {
  if (s == "none") return MitigationCombo::None;
  if (s == "qrem") return MitigationCombo::Qrem;
  if (s == "qrem+zne") return MitigationCombo::QremZne;
  if (s == "qrem+zne+twirl") return MitigationCombo::QremZneTwirl;
  throw std::invalid_argument("unknown mitigation combo: " + s);
}

struct ExperimentConfig {
  Strategy strategy = Strategy::General;
  std::vector<int> steps = {100};
  double total_time = kPi;
  std::string initial_state = "011";  // basis label, or "a+b" equal superposition
  Backend backend = Backend::Analytic;
  MitigationCombo mitigation = MitigationCombo::None;
  long shots = 8192;
  int repeats = 8;
  std::uint64_t seed = 2022;
  NoiseModel noise;           // used by the sampled-noisy backend
  bool noise_explicit = false;
  int twirls = 16;
  std::string endianness = "site-major";  // or "bit-major" for label rendering

  void validate() const {
    if (steps.empty()) throw std::invalid_argument("config: need at least one step count");
    for (int n : steps)
      if (n < 1) throw std::invalid_argument("config: step counts must be >= 1");
    if (shots < 1) throw std::invalid_argument("config: shots must be >= 1");
    if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (endianness != "site-major" && endianness != "bit-major")
      throw std::invalid_argument("config: endianness must be site-major or bit-major");
    TrotterPlan p{steps[0], total_time, strategy, 3,
                  initial_state.find('+') == std::string::npos ? initial_state : "011"};
    p.validate();
    if ((strategy == Strategy::ShallowSpecific || strategy == Strategy::ShallowShallow) &&
        initial_state.find('+') != std::string::npos)
      throw std::invalid_argument("shallow strategies need a computational-basis input");
    noise.validate();
  }

  NoiseModel effective_noise() const {
    if (backend != Backend::SampledNoisy) return NoiseModel::ideal();
    return noise_explicit ? noise : NoiseModel::preset_default(3);
  }

  nlohmann::json echo() const {
    nlohmann::json j;
    j["strategy"] = strategy_name(strategy);
    j["steps"] = steps;
    j["total_time"] = total_time;
    j["initial_state"] = initial_state;
    j["backend"] = backend_name(backend);
    j["mitigation"] = mitigation_name(mitigation);
    j["shots"] = shots;
    j["repeats"] = repeats;
    j["seed"] = seed;
    j["twirls"] = twirls;
    j["endianness"] = endianness;
    j["noise"] = effective_noise().to_json();
    return j;
  }
};

// --- initial states ---------------------------------------------------------

inline StateVector parse_initial_state(const std::string& spec, int width) {
  auto plus = spec.find('+');
  if (plus == std::string::npos) return StateVector::basis(width, spec);
  std::string a = spec.substr(0, plus), b = spec.substr(plus + 1);
  StateVector s(width);
  s.amps[0] = 0;
  s.amps.at(basis_index(a)) += 1.0 / std::sqrt(2.0);
  s.amps.at(basis_index(b)) += 1.0 / std::sqrt(2.0);
  if (std::abs(s.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("superposition labels must be two distinct basis states");
  return s;
}

// circuit preparing `spec` from |0...0>; superpositions must differ in one bit
inline Circuit preparation_circuit(const std::string& spec, int width) {
  Circuit c(width);
  auto plus = spec.find('+');
  if (plus == std::string::npos) {
    std::size_t idx = basis_index(spec);
    for (int q = 0; q < width; ++q)
      if ((idx >> q) & 1) c.x(q);
    return c;
  }
  std::size_t ia = basis_index(spec.substr(0, plus));
  std::size_t ib = basis_index(spec.substr(plus + 1));
  std::size_t diff = ia ^ ib;
  if (__builtin_popcountll(diff) != 1)
    throw std::invalid_argument("superposition preparation needs labels differing in one bit");
  std::size_t low = ia & ~diff;
  for (int q = 0; q < width; ++q)
    if ((low >> q) & 1) c.x(q);
  for (int q = 0; q < width; ++q)
    if ((diff >> q) & 1) c.h(q);
  return c;
}

inline std::string render_label(const std::string& site_major, const std::string& endianness) {
  if (endianness == "bit-major") return std::string(site_major.rbegin(), site_major.rend());
  return site_major;
}

// --- exact references -------------------------------------------------------

inline CMatrix exact_propagator_3(double t) {
  static const CMatrix h = build_heisenberg(3).to_matrix();
  return expm_hermitian(h, cxd(0, -t));
}

inline StateVector exact_evolved_state(const StateVector& in, double t) {
  CMatrix u = exact_propagator_3(t);
  CVector v = u * in.as_vector();
  std::vector<cxd> amps(v.data(), v.data() + v.size());
  return StateVector(in.width, std::move(amps));
}

// --- the tomography-based fidelity pipeline ---------------------------------

struct FidelityOutcome {
  double fidelity = 0;
  ExpectationTable expectations;  // scale-1, after mitigation
  PassReport pass_report;
  int circuit_cnots = 0;
};

namespace detail {

inline std::map<std::string, std::vector<double>> measure_all_settings(
    const Circuit& circ, const StateVector& input, const NoiseModel& noise,
    bool sample, long shots, std::uint64_t seed, std::uint64_t salt) {
  std::map<std::string, std::vector<double>> freqs;
  DensityMatrix rho0 = DensityMatrix::from_state(input);
  std::uint64_t si = 0;
  for (const auto& [setting, c] : tomography_circuits(circ)) {
    DensityMatrix out = evolve_density(c, rho0, noise);
    if (sample) {
      auto p = apply_readout(born_probabilities(out), noise.readout, out.width);
      Pcg32 rng = derive_stream(seed, "tomography", salt, si);
      Histogram h = sample_probabilities(p, out.width, shots, rng);
      freqs[setting] = frequencies(h, out.width, shots);
    } else {
      freqs[setting] = apply_readout(born_probabilities(out), noise.readout, out.width);
    }
    ++si;
  }
  return freqs;
}

inline void mitigate_all(std::map<std::string, std::vector<double>>& freqs,
                         const AssignmentMatrix& am) {
  for (auto& [setting, f] : freqs) f = mitigate_counts(am, f);
}

}  // namespace detail

// One tomography experiment: evolve, measure all 27 settings (optionally per
// fold scale and twirl member), mitigate, reconstruct, project, score.
inline FidelityOutcome run_fidelity_once(const ExperimentConfig& cfg, Strategy strategy,
                                         MitigationCombo combo, int steps, int repeat) {
  TrotterPlan plan{steps, cfg.total_time, strategy, 3, cfg.initial_state};
  Circuit circ = build_evolution(plan);

  FidelityOutcome out;
  NoiseModel noise = cfg.effective_noise();
  if (noise.readout.empty()) noise.readout.assign(3, ReadoutConfusion{});

  if (cfg.backend == Backend::SampledNoisy) {
    auto [opt, rep] = optimize(circ);
    out.pass_report = rep;
    circ = std::move(opt);
  }
  out.circuit_cnots = circ.cnot_count();

  StateVector input = parse_initial_state(cfg.initial_state, 3);
  StateVector target = exact_evolved_state(input, cfg.total_time);

  const bool sample = cfg.backend != Backend::Analytic;
  const bool use_qrem = combo != MitigationCombo::None;
  const bool use_zne = combo == MitigationCombo::QremZne || combo == MitigationCombo::QremZneTwirl;
  const bool use_twirl = combo == MitigationCombo::QremZneTwirl;

  AssignmentMatrix am;
  if (use_qrem) {
    if (sample)
      am = calibrate(noise, 3, cfg.shots,
                     derive_stream(cfg.seed, "calibration", repeat).next_u32());
    else
      am = assignment_from_confusions(noise.readout);
  }

  ZneSchedule schedule;
  std::vector<double> scales = use_zne ? schedule.scale_factors : std::vector<double>{1.0};

  std::vector<ExpectationTable> tables;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    Circuit folded = fold(circ, scales[si]);
    std::vector<Circuit> members;
    long shots_each = cfg.shots;
    if (use_twirl) {
      TwirledEnsemble ens =
          twirl(folded, cfg.twirls,
                derive_stream(cfg.seed, "twirl-seed", repeat, si).next_u32());
      members = std::move(ens.circuits);
      shots_each = std::max<long>(1, cfg.shots / cfg.twirls);
    } else {
      members = {folded};
    }
    // uniform average of member outcome distributions
    std::map<std::string, std::vector<double>> freqs;
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
      auto f = detail::measure_all_settings(
          members[mi], input, noise, sample, shots_each, cfg.seed,
          (static_cast<std::uint64_t>(repeat) << 20) ^ (si << 10) ^ mi);
      for (auto& [setting, v] : f) {
        auto& acc = freqs[setting];
        if (acc.empty()) acc.assign(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] / double(members.size());
      }
    }
    if (use_qrem) detail::mitigate_all(freqs, am);
    ExpectationTable t = estimate_expectations(freqs, 3, shots_each);
    t.scale_factor = scales[si];
    tables.push_back(std::move(t));
  }

  ExpectationTable finalt;
  if (use_zne) {
    finalt.width = 3;
    finalt.shots_per_setting = cfg.shots;
    finalt.scale_factor = 0.0;
    for (const auto& [p, v0] : tables[0].values) {
      (void)v0;
      std::vector<double> vals;
      for (const auto& t : tables) vals.push_back(t.at(p));
      finalt.values[p] = p.find_first_not_of('I') == std::string::npos
                             ? 1.0
                             : extrapolate(schedule, vals);
    }
  } else {
    finalt = tables[0];
  }
  finalt.values[std::string(3, 'I')] = 1.0;

  DensityMatrix rho = project_mle(reconstruct_linear(finalt));
  out.fidelity = fidelity(rho, target);
  out.expectations = std::move(finalt);
  return out;
}

// --- run_evolve -------------------------------------------------------------

struct EvolvePoint {
  double t = 0;
  double simulated = 0;
  double exact = 0;
  double sigma = 0;  // binomial 1-sigma envelope for sampled backends
};

struct EvolveResult {
  std::vector<EvolvePoint> points;
  nlohmann::json config;
};

// 21 grid points between 0 and total_time; every point is simulated with the
// configured number of Trotter steps.
inline EvolveResult run_evolve(const ExperimentConfig& cfg) {
  cfg.validate();
  EvolveResult res;
  res.config = cfg.echo();
  const int n = cfg.steps[0];
  StateVector psi0 = parse_initial_state(cfg.initial_state, 3);
  Circuit undo_prep = preparation_circuit(cfg.initial_state, 3).inverse();
  NoiseModel noise = cfg.effective_noise();
  if (noise.readout.empty()) noise.readout.assign(3, ReadoutConfusion{});

  for (int k = 0; k <= 20; ++k) {
    double t = cfg.total_time * k / 20.0;
    EvolvePoint pt;
    pt.t = t;
    StateVector ex = exact_evolved_state(psi0, t);
    pt.exact = std::norm(overlap(psi0, ex));
    if (k == 0) {
      pt.simulated = 1.0;
      res.points.push_back(pt);
      continue;
    }
    TrotterPlan plan{n, t, cfg.strategy, 3, cfg.initial_state};
    Circuit circ = build_evolution(plan);
    if (cfg.backend == Backend::Analytic) {
      StateVector sim = apply(circ, psi0);
      pt.simulated = std::norm(overlap(psi0, sim));
    } else {
      // measure the overlap as the 000-frequency after un-preparing psi0
      Circuit meas = circ;
      meas.append(undo_prep);
      DensityMatrix rho = evolve_density(meas, DensityMatrix::from_state(psi0), noise);
      auto p = apply_readout(born_probabilities(rho), noise.readout, 3);
      Pcg32 rng = derive_stream(cfg.seed, "evolve", k);
      Histogram h = sample_probabilities(p, 3, cfg.shots, rng);
      auto f = frequencies(h, 3, cfg.shots);
      pt.simulated = f[0];
      StateVector sim = apply(circ, psi0);
      double ptrue = std::norm(overlap(psi0, sim));
      pt.sigma = std::sqrt(std::max(ptrue * (1 - ptrue), 1e-12) / double(cfg.shots));
    }
    res.points.push_back(pt);
  }
  return res;
}

// --- run_sweep --------------------------------------------------------------

struct SweepRow {
  int steps = 0;
  double mean = 0;
  double stddev = 0;
  std::vector<double> fidelities;
  int cnots = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json config;
};

inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.config = cfg.echo();
  for (int n : cfg.steps) {
    SweepRow row;
    row.steps = n;
    for (int r = 0; r < cfg.repeats; ++r) {
      ExperimentConfig c = cfg;
      c.seed = derive_stream(cfg.seed, "sweep-repeat", n, r).next_u32() |
               (std::uint64_t(n) << 32);
      FidelityOutcome f = run_fidelity_once(c, cfg.strategy, cfg.mitigation, n, r);
      row.fidelities.push_back(f.fidelity);
      row.cnots = f.circuit_cnots;
    }
    double m = 0;
    for (double f : row.fidelities) m += f;
    m /= row.fidelities.size();
    double v = 0;
    for (double f : row.fidelities) v += (f - m) * (f - m);
    row.mean = m;
    row.stddev = row.fidelities.size() > 1
                     ? std::sqrt(v / (row.fidelities.size() - 1))
                     : 0.0;
    res.rows.push_back(std::move(row));
  }
  return res;
}

// --- run_table --------------------------------------------------------------

struct TableCell {
  Strategy strategy;
  MitigationCombo combo;
  double mean = 0;
  double stddev = 0;
  std::vector<double> fidelities;
  ExpectationTable expectations;  // from the first repeat
};

struct TableResult {
  std::vector<TableCell> cells;
  nlohmann::json config;

  const TableCell& at(Strategy s, MitigationCombo m) const {
    for (const auto& c : cells)
      if (c.strategy == s && c.combo == m) return c;
    throw std::out_of_range("table cell missing");
  }
};

inline TableResult run_table(const ExperimentConfig& cfg) {
  cfg.validate();
  TableResult res;
  res.config = cfg.echo();
  const int n = cfg.steps[0];
  const Strategy strategies[3] = {Strategy::General, Strategy::ShallowSpecific,
                                  Strategy::ShallowShallow};
  const MitigationCombo combos[4] = {MitigationCombo::None, MitigationCombo::Qrem,
                                     MitigationCombo::QremZne, MitigationCombo::QremZneTwirl};
  for (Strategy s : strategies) {
    for (MitigationCombo m : combos) {
      TableCell cell;
      cell.strategy = s;
      cell.combo = m;
      for (int r = 0; r < cfg.repeats; ++r) {
        ExperimentConfig c = cfg;
        c.seed = derive_stream(cfg.seed, "table-repeat",
                               fnv1a64(strategy_name(s)) ^ fnv1a64(mitigation_name(m)), r)
                     .next_u32();
        FidelityOutcome f = run_fidelity_once(c, s, m, n, r);
        cell.fidelities.push_back(f.fidelity);
        if (r == 0) cell.expectations = std::move(f.expectations);
      }
      double mm = 0;
      for (double f : cell.fidelities) mm += f;
      mm /= cell.fidelities.size();
      double v = 0;
      for (double f : cell.fidelities) v += (f - mm) * (f - mm);
      cell.mean = mm;
      cell.stddev =
          cell.fidelities.size() > 1 ? std::sqrt(v / (cell.fidelities.size() - 1)) : 0.0;
      res.cells.push_back(std::move(cell));
    }
  }
  return res;
}

// --- serialization ----------------------------------------------------------

inline std::string csv_comment_config(const nlohmann::json& cfg) {
  return "# config: " + cfg.dump() + "\n";
}

inline std::string evolve_csv(const EvolveResult& r) {
  std::ostringstream os;
  os << csv_comment_config(r.config);
  os << "t,simulated,exact,sigma\n";
  for (const auto& p : r.points)
    os << format_double(p.t) << ',' << format_double(p.simulated) << ','
       << format_double(p.exact) << ',' << format_double(p.sigma) << '\n';
  return os.str();
}

inline std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << csv_comment_config(r.config);
  os << "steps,mean_fidelity,stddev,cnots";
  std::size_t reps = r.rows.empty() ? 0 : r.rows[0].fidelities.size();
  for (std::size_t i = 0; i < reps; ++i) os << ",f" << i;
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.steps << ',' << format_double(row.mean) << ',' << format_double(row.stddev)
       << ',' << row.cnots;
    for (double f : row.fidelities) os << ',' << format_double(f);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json table_json(const TableResult& r) {
  nlohmann::json j;
  j["config"] = r.config;
  auto rows = nlohmann::json::array();
  for (const auto& c : r.cells) {
    nlohmann::json cj;
    cj["strategy"] = strategy_name(c.strategy);
    cj["mitigation"] = mitigation_name(c.combo);
    cj["mean"] = c.mean;
    cj["stddev"] = c.stddev;
    cj["fidelities"] = c.fidelities;
    rows.push_back(cj);
  }
  j["cells"] = rows;
  return j;
}

inline std::string table_text(const TableResult& r) {
  std::ostringstream os;
  os << "strategy            mitigation        fidelity\n";
  char buf[128];
  for (const auto& c : r.cells) {
    std::snprintf(buf, sizeof buf, "%-19s %-15s %.4f +/- %.4f\n",
                  strategy_name(c.strategy), mitigation_name(c.combo), c.mean, c.stddev);
    os << buf;
  }
  return os.str();
}

// minimal standalone SVG line chart
inline std::string svg_line_chart(const std::string& title,
                                  const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                                  const nlohmann::json& config) {
  const double W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 40;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = 1.0;
  for (const auto& [name, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  static const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd"};
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<!-- config: " << config.dump() << " -->\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
     << "</text>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    double y = ymin + (ymax - ymin) * i / 4;
    os << "<text x='" << ml - 8 << "' y='" << py(y) + 4
       << "' text-anchor='end' font-size='11'>" << format_double(std::round(y * 1000) / 1000)
       << "</text>\n";
    double x = xmin + (xmax - xmin) * i / 4;
    os << "<text x='" << px(x) << "' y='" << H - mb + 16
       << "' text-anchor='middle' font-size='11'>" << format_double(std::round(x * 100) / 100)
       << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, pts] : series) {
    const char* col = colors[ci % 4];
    os << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
    os << "'/>\n";
    for (const auto& [x, y] : pts)
      os << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.5' fill='" << col
         << "'/>\n";
    os << "<text x='" << W - mr - 10 << "' y='" << mt + 16 * (ci + 1)
       << "' text-anchor='end' font-size='12' fill='" << col << "'>" << name << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

}  // namespace symtrot
