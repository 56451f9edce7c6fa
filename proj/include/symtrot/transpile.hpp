#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "symtrot/circuit.hpp"
#include "symtrot/kak.hpp"

namespace symtrot {

struct PassReport {
  int input_cnots = 0;
  int output_cnots = 0;
  int input_depth = 0;
  int output_depth = 0;
  std::vector<std::string> passes_applied;
  int rounds = 0;
  bool converged = true;

  nlohmann::json to_json() const {
    return nlohmann::json{{"input_cnots", input_cnots},
                          {"output_cnots", output_cnots},
                          {"input_depth", input_depth},
                          {"output_depth", output_depth},
                          {"passes_applied", passes_applied},
                          {"rounds", rounds},
                          {"converged", converged}};
  }
};

namespace transpile_detail {

inline double wrap_angle_mod_4pi(double a) {
  const double period = 4 * kPi;
  a = std::fmod(a, period);
  if (a > 2 * kPi) a -= period;
  if (a <= -2 * kPi) a += period;
  return a;
}

inline bool touches(const Gate& g, int q) {
  if (g.kind == GateKind::Barrier) return true;  // barriers block every wire
  return g.q0 == q || g.q1 == q;
}

}  // namespace transpile_detail

// Merge adjacent same-axis rotations on the same wire (mod 4pi), dropping
// zero-angle results; a merged angle of 2pi is identity up to sign, which
// goes into the global phase.
inline Circuit fuse_rotations(const Circuit& in) {
  using namespace transpile_detail;
  Circuit out(in.width);
  out.global_phase = in.global_phase;
  out.metadata = in.metadata;
  for (const auto& g : in.gates) {
    if (is_rotation(g.kind)) {
      // find the last emitted gate touching this wire
      int last = -1;
      for (int i = static_cast<int>(out.gates.size()) - 1; i >= 0; --i) {
        if (touches(out.gates[i], g.q0)) {
          last = i;
          break;
        }
      }
      if (last >= 0 && out.gates[last].kind == g.kind && out.gates[last].q0 == g.q0) {
        double merged = wrap_angle_mod_4pi(out.gates[last].angle + g.angle);
        out.gates.erase(out.gates.begin() + last);
        if (std::abs(merged) < 1e-14) continue;
        if (std::abs(std::abs(merged) - 2 * kPi) < 1e-14) {
          out.global_phase += kPi;
          continue;
        }
        Gate m = g;
        m.angle = merged;
        out.gates.push_back(m);
        continue;
      }
      Gate m = g;
      m.angle = wrap_angle_mod_4pi(m.angle);
      if (std::abs(m.angle) < 1e-14) continue;
      out.gates.push_back(m);
      continue;
    }
    out.gates.push_back(g);
  }
  return out;
}

// Cancel CNOT pairs on the same (control, target) when everything between
// them commutes through: Z/RZ on the control line, X/RX on the target line.
inline Circuit cancel_cnots(const Circuit& in) {
  using namespace transpile_detail;
  Circuit out = in;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < out.gates.size() && !changed; ++i) {
      const Gate& g = out.gates[i];
      if (g.kind != GateKind::CNOT) continue;
      for (std::size_t j = i + 1; j < out.gates.size(); ++j) {
        const Gate& h = out.gates[j];
        if (h.kind == GateKind::CNOT && h.q0 == g.q0 && h.q1 == g.q1) {
          out.gates.erase(out.gates.begin() + j);
          out.gates.erase(out.gates.begin() + i);
          changed = true;
          break;
        }
        bool on_control = touches(h, g.q0);
        bool on_target = touches(h, g.q1);
        if (!on_control && !on_target) continue;
        bool ok = true;
        if (on_control && on_target) ok = false;  // another entangling gate
        else if (on_control)
          ok = (h.kind == GateKind::RZ || h.kind == GateKind::Z) && h.q0 == g.q0;
        else
          ok = (h.kind == GateKind::RX || h.kind == GateKind::X) && h.q0 == g.q1;
        if (!ok) break;
      }
    }
  }
  return out;
}

// Collapse maximal single-qubit runs per wire to their canonical ZXZ form
// (at most three rotations); global phase is tracked exactly.
inline Circuit resynthesize_1q(const Circuit& in) {
  using namespace transpile_detail;
  // slot per gate; runs get replaced in place at their last slot
  std::vector<std::vector<Gate>> slots(in.gates.size());
  std::vector<bool> keep(in.gates.size(), true);
  double phase = in.global_phase;

  std::vector<std::vector<std::size_t>> run(in.width);
  auto flush = [&](int q) {
    auto& idxs = run[q];
    if (idxs.empty()) return;
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    for (std::size_t k : idxs)
      u = Eigen::Matrix2cd(gate_matrix_1q(in.gates[k].kind, in.gates[k].angle)) * u;
    Circuit tmp(1);
    phase += emit_local_1q(tmp, u, 0);
    for (std::size_t k : idxs) keep[k] = false;
    std::size_t lastidx = idxs.back();
    keep[lastidx] = true;
    slots[lastidx].clear();
    for (auto g : tmp.gates) {
      g.q0 = q;
      slots[lastidx].push_back(g);
    }
    idxs.clear();
  };

  for (std::size_t i = 0; i < in.gates.size(); ++i) {
    const Gate& g = in.gates[i];
    slots[i] = {g};
    if (g.kind == GateKind::Barrier) {
      for (int q = 0; q < in.width; ++q) flush(q);
      continue;
    }
    if (is_two_qubit(g.kind)) {
      flush(g.q0);
      flush(g.q1);
      continue;
    }
    run[g.q0].push_back(i);
  }
  for (int q = 0; q < in.width; ++q) flush(q);

  Circuit out(in.width);
  out.global_phase = phase;
  out.metadata = in.metadata;
  for (std::size_t i = 0; i < in.gates.size(); ++i) {
    if (!keep[i]) continue;
    for (const auto& g : slots[i]) out.gates.push_back(g);
  }
  return out;
}

// Exact resynthesis of contiguous two-qubit segments through the Cartan
// form; a segment is rewritten only when that strictly lowers its CNOT
// count (SWAPs counted as three).
inline Circuit consolidate_blocks(const Circuit& in) {
  using namespace transpile_detail;
  Circuit out(in.width);
  out.global_phase = in.global_phase;
  out.metadata = in.metadata;

  struct Segment {
    std::set<int> support;
    std::vector<Gate> gates;
  };
  Segment seg;

  auto effective_cnots = [](const std::vector<Gate>& gs) {
    int n = 0;
    for (const auto& g : gs) {
      if (g.kind == GateKind::CNOT) n += 1;
      if (g.kind == GateKind::SWAP) n += 3;
    }
    return n;
  };

  auto flush = [&](Segment& s) {
    if (s.gates.empty()) return;
    int input_cnots = effective_cnots(s.gates);
    if (s.support.size() == 2 && input_cnots >= 1) {
      std::vector<int> qs(s.support.begin(), s.support.end());
      // local qubit 0 = lower index
      Circuit local(2);
      std::vector<int> back(in.width, -1);
      back[qs[0]] = 0;
      back[qs[1]] = 1;
      for (auto g : s.gates) {
        g.q0 = back[g.q0];
        if (g.q1 >= 0) g.q1 = back[g.q1];
        local.add(g);
      }
      try {
        KakDecomposition kd = kak_decompose(unitary_of(local));
        Circuit cand(2);
        cand.global_phase = kd.phase;
        // k2 first (kron high factor acts on local qubit 1)
        cand.global_phase += emit_local_1q(cand, kd.k2r, 0);
        cand.global_phase += emit_local_1q(cand, kd.k2l, 1);
        emit_canonical_chain(cand, kd.a, kd.b, kd.c, 0, 1);
        cand.global_phase += emit_local_1q(cand, kd.k1r, 0);
        cand.global_phase += emit_local_1q(cand, kd.k1l, 1);
        if (cand.cnot_count() < input_cnots) {
          out.global_phase += cand.global_phase - local.global_phase;
          for (auto g : cand.gates) {
            g.q0 = qs[g.q0];
            if (g.q1 >= 0) g.q1 = qs[g.q1];
            out.gates.push_back(g);
          }
          s = Segment{};
          return;
        }
      } catch (const std::runtime_error&) {
        // keep the segment untouched if the decomposition declines
      }
    }
    for (const auto& g : s.gates) out.gates.push_back(g);
    s = Segment{};
  };

  for (const auto& g : in.gates) {
    if (g.kind == GateKind::Barrier) {
      flush(seg);
      out.gates.push_back(g);
      continue;
    }
    std::set<int> next = seg.support;
    next.insert(g.q0);
    if (g.q1 >= 0) next.insert(g.q1);
    if (next.size() > 2) {
      flush(seg);
      seg.support.clear();
      seg.support.insert(g.q0);
      if (g.q1 >= 0) seg.support.insert(g.q1);
      seg.gates = {g};
      continue;
    }
    seg.support = std::move(next);
    seg.gates.push_back(g);
  }
  flush(seg);
  return out;
}

namespace transpile_detail {
inline bool same_structure(const Circuit& a, const Circuit& b) {
  if (a.width != b.width || a.gates.size() != b.gates.size()) return false;
  if (a.global_phase != b.global_phase) return false;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    const Gate &x = a.gates[i], &y = b.gates[i];
    if (x.kind != y.kind || x.q0 != y.q0 || x.q1 != y.q1 || x.angle != y.angle)
      return false;
  }
  return true;
}
}  // namespace transpile_detail

// Fixpoint iteration of fuse -> commute-aware cancel -> 1q resynthesis ->
// two-qubit consolidation.  Non-convergence inside max_rounds is reported
// via the `converged` flag, not an error.
inline std::pair<Circuit, PassReport> optimize(const Circuit& in, int max_rounds = 8) {
  if (max_rounds < 1) throw std::invalid_argument("optimize: max_rounds must be >= 1");
  PassReport rep;
  rep.input_cnots = in.cnot_count();
  rep.input_depth = in.depth();
  rep.passes_applied = {"fuse_rotations", "cancel_cnots", "resynthesize_1q",
                        "consolidate_blocks"};
  Circuit cur = in;
  rep.converged = false;
  for (int round = 0; round < max_rounds; ++round) {
    Circuit next = consolidate_blocks(resynthesize_1q(cancel_cnots(fuse_rotations(cur))));
    ++rep.rounds;
    if (transpile_detail::same_structure(next, cur)) {
      rep.converged = true;
      break;
    }
    cur = std::move(next);
  }
  rep.output_cnots = cur.cnot_count();
  rep.output_depth = cur.depth();
  return {cur, rep};
}

}  // namespace symtrot
