#pragma once

#include <cmath>
#include <set>
#include <string>

#include "symtrot/circuit.hpp"
#include "symtrot/model.hpp"

namespace symtrot {

enum class Strategy { Naive, General, ShallowSpecific, ShallowShallow };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::General: return "general";
    case Strategy::ShallowSpecific: return "shallow_specific";
    case Strategy::ShallowShallow: return "shallow_shallow";
  }
  return "?";
}

inline Strategy strategy_from_name(const std::string& s) {
  if (s == "naive") return Strategy::Naive;
  if (s == "general") return Strategy::General;
  if (s == "shallow_specific") return Strategy::ShallowSpecific;
  if (s == "shallow_shallow") return Strategy::ShallowShallow;
  throw std::invalid_argument("unknown strategy: " + s);
}

struct TrotterPlan {
  int steps = 1;
  double total_time = kPi;
  Strategy strategy = Strategy::General;
  int width = 3;
  // shallow strategies bake the initial basis state into the circuit
  std::string initial_basis = "011";

  void validate() const {
    if (steps < 1) throw std::invalid_argument("plan: steps must be >= 1");
    if (width != 3) throw std::invalid_argument("plan: strategies are defined on 3 sites");
    if (strategy == Strategy::ShallowShallow) {
      double k = total_time / kPi;
      if (std::abs(k - std::round(k)) > 1e-9)
        throw std::invalid_argument(
            "shallow_shallow is only valid at times that are integer multiples of pi");
    }
    if (strategy == Strategy::ShallowSpecific || strategy == Strategy::ShallowShallow) {
      if (initial_basis.size() != 3 ||
          initial_basis.find_first_not_of("01") != std::string::npos)
        throw std::invalid_argument("shallow strategies need a computational-basis input");
      int ones = 0;
      for (char ch : initial_basis) ones += ch == '1';
      if (ones % 2 != 0)
        throw std::invalid_argument(
            "shallow strategies assume an even-parity basis input");
    }
  }
};

// exp(-i dt (XX+YY+ZZ)) on (qa, qb): the three commuting factors, each as a
// CNOT-conjugated Z rotation; exact including global phase.
inline Circuit pair_evolution(int qa, int qb, double dt, int width) {
  Circuit c(width);
  // ZZ
  c.cnot(qa, qb).rz(qb, 2 * dt).cnot(qa, qb);
  // XX
  c.h(qa).h(qb).cnot(qa, qb).rz(qb, 2 * dt).cnot(qa, qb).h(qa).h(qb);
  // YY
  c.rx(qa, kPi / 2).rx(qb, kPi / 2).cnot(qa, qb).rz(qb, 2 * dt).cnot(qa, qb);
  c.rx(qa, -kPi / 2).rx(qb, -kPi / 2);
  return c;
}

// One naive first-order step: the (1,2) pair evolution, then (2,3).
inline Circuit naive_step(double dt) {
  Circuit c(3);
  c.append(pair_evolution(0, 1, dt, 3));
  c.append(pair_evolution(1, 2, dt, 3));
  return c;
}

// exp(+i theta (X1 Z2 + Z1 X2)) with two identically oriented CNOTs:
// H on the target maps the generator to XX + ZZ, which a single CNOT pair
// turns into independent X and Z rotations.
inline Circuit second_block(double theta) {
  Circuit c(2);
  c.h(1);
  c.cnot(0, 1);
  c.rx(0, -2 * theta);
  c.rz(1, -2 * theta);
  c.cnot(0, 1);
  c.h(1);
  return c;
}

// The full Trotter unit exp(-i th (X1+Z2)) exp(+i th (X1Z2+Z1X2))
// exp(-i th (X2+Z1)); outer blocks are plain rotation layers since X and Z
// act on different qubits there.
inline Circuit trotter_unit(double theta) {
  Circuit c(2);
  c.rz(0, 2 * theta).rx(1, 2 * theta);
  c.append(second_block(theta));
  c.rx(0, 2 * theta).rz(1, 2 * theta);
  return c;
}

// Gate realization of the 3-site encoder permutation, which is linear over
// GF(2): bit0' = b0^b1^b2 (parity), bit1' = b1^b2, bit2' = b0^b1.
inline Circuit encoder_circuit_3() {
  Circuit c(3);
  c.cnot(2, 1).cnot(1, 0).cnot(0, 2);
  return c;
}

inline Circuit decoder_circuit_3() { return encoder_circuit_3().inverse(); }

// Decoder restricted to the image of the even-parity subspace (bit0 = 0):
// only two CNOTs are needed there; behavior on odd-subspace inputs is
// deliberately unspecified.
inline Circuit specific_decoder_circuit() {
  Circuit c(3);
  c.cnot(1, 0).cnot(2, 1);
  return c;
}

namespace detail {
// X layer turning basis state `from` into basis state `to`
inline void relabel(Circuit& c, std::size_t from, std::size_t to) {
  for (int q = 0; q < c.width; ++q)
    if (((from ^ to) >> q) & 1) c.x(q);
}
}  // namespace detail

inline Circuit build_evolution(const TrotterPlan& plan) {
  plan.validate();
  const double dt = plan.total_time / plan.steps;
  Circuit body2 = trotter_unit(dt);
  Circuit c(3);
  c.metadata["strategy"] = strategy_name(plan.strategy);
  c.metadata["steps"] = std::to_string(plan.steps);
  c.metadata["time"] = format_double(plan.total_time);

  switch (plan.strategy) {
    case Strategy::Naive: {
      for (int s = 0; s < plan.steps; ++s) c.append(naive_step(dt));
      return c;
    }
    case Strategy::General: {
      c.append(encoder_circuit_3());
      Circuit unit3 = body2.embedded(3, 1);  // encoded register: qubits 1,2
      for (int s = 0; s < plan.steps; ++s) c.append(unit3);
      c.append(decoder_circuit_3());
      return c;
    }
    case Strategy::ShallowSpecific:
    case Strategy::ShallowShallow: {
      EncodingOperator enc = build_encoder_3();
      std::size_t in = basis_index(plan.initial_basis);
      std::size_t encoded = enc.basis_map[in];
      detail::relabel(c, in, encoded);  // shallow encoding: plain relabeling
      Circuit unit3 = body2.embedded(3, 1);
      for (int s = 0; s < plan.steps; ++s) c.append(unit3);
      if (plan.strategy == Strategy::ShallowSpecific) {
        c.append(specific_decoder_circuit());
      } else {
        // at t in pi*Z the encoded state returns to its basis label, so
        // decoding is the inverse relabeling
        detail::relabel(c, encoded, in);
      }
      return c;
    }
  }
  throw std::logic_error("unreachable");
}

// --- flexible Trotter axis (5-site reference scale) -------------------------

// Standard 6-CNOT Toffoli decomposition; T gates are carried as RZ(pi/4)
// with the accumulated pi/8 phases folded into the circuit's global phase.
inline void emit_toffoli(Circuit& c, int a, int b, int t) {
  const double T = kPi / 4;
  c.h(t);
  c.cnot(b, t).rz(t, -T);
  c.cnot(a, t).rz(t, T);
  c.cnot(b, t).rz(t, -T);
  c.cnot(a, t).rz(b, T).rz(t, T);
  c.h(t);
  c.cnot(a, b).rz(a, T).rz(b, -T);
  c.cnot(a, b);
  c.global_phase += kPi / 8;
}

// Circuit for the local block encoder on qubits (a, b, t) = sites
// (2m-1, 2m, 2m+1): the block permutation decomposes into four CNOTs and
// one Toffoli (derived from its boolean update rules).
inline Circuit encoder_block_circuit(int m, int width) {
  const int a = 2 * m - 2, b = 2 * m - 1, t = 2 * m;
  if (t >= width) throw std::invalid_argument("encoder block exceeds register");
  Circuit c(width);
  c.cnot(t, b);
  emit_toffoli(c, a, b, t);
  c.cnot(b, t).cnot(a, b).cnot(b, a);
  return c;
}

// One first-order step of the partially transformed Hamiltonian: blocks in
// x_set evolve with raw pair circuits, the rest in the encoded frame via the
// block encoder and one Trotter unit on the block's outer sites.
inline Circuit flexible_axis_step(int n_sites, const std::set<int>& x_set, double dt) {
  if (n_sites != 5)
    throw std::invalid_argument("flexible_axis_step: reference implementation covers 5 sites");
  const int k = (n_sites - 1) / 2;
  for (int m : x_set)
    if (m < 1 || m > k) throw std::invalid_argument("flexible_axis_step: invalid block subset");
  Circuit c(n_sites);
  for (int m = 1; m <= k; ++m) {
    if (x_set.count(m)) {
      c.append(pair_evolution(2 * m - 2, 2 * m - 1, dt, n_sites));
      c.append(pair_evolution(2 * m - 1, 2 * m, dt, n_sites));
    } else {
      Circuit enc = encoder_block_circuit(m, n_sites);
      c.append(enc);
      c.append(trotter_unit(dt).remapped(n_sites, {2 * m - 2, 2 * m}));
      c.append(enc.inverse());
    }
  }
  return c;
}

// The plain pairwise step at 5 sites (all blocks raw), for comparisons.
inline Circuit naive_step_5(double dt) {
  return flexible_axis_step(5, {1, 2}, dt);
}

}  // namespace symtrot
