#pragma once

#include <map>
#include <string>

#include "symtrot/circuit.hpp"
#include "symtrot/noise.hpp"
#include "symtrot/rng.hpp"

namespace symtrot {

namespace detail {

// rho -> U rho U+ for a single gate, applied in place via row/column updates.
inline void conjugate_gate(const Gate& g, DensityMatrix& dm) {
  const std::size_t dim = std::size_t{1} << dm.width;
  if (g.kind == GateKind::Barrier) return;
  if (g.kind == GateKind::CNOT || g.kind == GateKind::SWAP) {
    // permutation conjugation: rho -> P rho P^T
    auto perm = [&](std::size_t x) {
      if (g.kind == GateKind::CNOT)
        return (x & (std::size_t{1} << g.q0)) ? x ^ (std::size_t{1} << g.q1) : x;
      std::size_t a = (x >> g.q0) & 1, b = (x >> g.q1) & 1;
      std::size_t y = x & ~((std::size_t{1} << g.q0) | (std::size_t{1} << g.q1));
      return y | (b << g.q0) | (a << g.q1);
    };
    CMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) out(perm(r), perm(c)) = dm.rho(r, c);
    dm.rho = std::move(out);
    return;
  }
  const CMatrix u = gate_matrix_1q(g.kind, g.angle);
  const std::size_t bit = std::size_t{1} << g.q0;
  // left multiply: rows
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      cxd a0 = dm.rho(r, c), a1 = dm.rho(r | bit, c);
      dm.rho(r, c) = u(0, 0) * a0 + u(0, 1) * a1;
      dm.rho(r | bit, c) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  // right multiply by U+: columns
  for (std::size_t c = 0; c < dim; ++c) {
    if (c & bit) continue;
    for (std::size_t r = 0; r < dim; ++r) {
      cxd a0 = dm.rho(r, c), a1 = dm.rho(r, c | bit);
      dm.rho(r, c) = a0 * std::conj(u(0, 0)) + a1 * std::conj(u(0, 1));
      dm.rho(r, c | bit) = a0 * std::conj(u(1, 0)) + a1 * std::conj(u(1, 1));
    }
  }
}

}  // namespace detail

// Unitary conjugation gate by gate with a depolarizing channel inserted after
// each gate (p1 for one-qubit kinds, p2 on the pair for CNOT/SWAP).  Readout
// confusion is NOT applied here; it belongs to sampling.
inline DensityMatrix evolve_density(const Circuit& c, const DensityMatrix& in,
                                    const NoiseModel& noise = NoiseModel::ideal()) {
  if (c.width != in.width)
    throw std::invalid_argument("evolve_density: width mismatch");
  noise.validate();
  DensityMatrix dm = in;
  for (const auto& g : c.gates) {
    detail::conjugate_gate(g, dm);
    if (g.kind == GateKind::Barrier) continue;
    if (is_two_qubit(g.kind)) {
      if (noise.p2 > 0) dm = depolarize(dm, {g.q0, g.q1}, noise.p2);
    } else {
      if (noise.p1 > 0) dm = depolarize(dm, {g.q0}, noise.p1);
    }
  }
  return dm;
}

// --- measurement ------------------------------------------------------------

inline std::vector<double> born_probabilities(const StateVector& psi) {
  std::vector<double> p(psi.amps.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi.amps[i]);
  return p;
}

inline std::vector<double> born_probabilities(const DensityMatrix& dm) {
  std::vector<double> p(static_cast<std::size_t>(dm.rho.rows()));
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::max(0.0, dm.rho(i, i).real());
  return p;
}

// push the outcome distribution through per-qubit confusion matrices
inline std::vector<double> apply_readout(std::vector<double> p,
                                         const std::vector<ReadoutConfusion>& readout,
                                         int width) {
  if (readout.empty()) return p;
  if (static_cast<int>(readout.size()) != width)
    throw std::invalid_argument("readout confusion list must cover every qubit");
  for (int q = 0; q < width; ++q) {
    const auto& r = readout[q].m;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t x = 0; x < p.size(); ++x) {
      if (x & bit) continue;
      double p0 = p[x], p1 = p[x | bit];
      p[x] = r(0, 0) * p0 + r(0, 1) * p1;
      p[x | bit] = r(1, 0) * p0 + r(1, 1) * p1;
    }
  }
  return p;
}

using Histogram = std::map<std::string, long>;

inline Histogram sample_probabilities(const std::vector<double>& probs, int width,
                                      long shots, Pcg32& rng) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  std::vector<double> cdf(probs.size());
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs[i]);
    cdf[i] = acc;
  }
  Histogram h;
  for (long s = 0; s < shots; ++s) {
    double u = rng.uniform01() * acc;
    std::size_t idx = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (idx >= probs.size()) idx = probs.size() - 1;
    ++h[index_label(idx, width)];
  }
  return h;
}

inline Histogram sample_counts(const StateVector& psi, long shots,
                               const std::vector<ReadoutConfusion>& readout,
                               std::uint64_t seed) {
  auto p = apply_readout(born_probabilities(psi), readout, psi.width);
  Pcg32 rng = derive_stream(seed, "sample");
  return sample_probabilities(p, psi.width, shots, rng);
}

inline Histogram sample_counts(const DensityMatrix& dm, long shots,
                               const std::vector<ReadoutConfusion>& readout,
                               std::uint64_t seed) {
  auto p = apply_readout(born_probabilities(dm), readout, dm.width);
  Pcg32 rng = derive_stream(seed, "sample");
  return sample_probabilities(p, dm.width, shots, rng);
}

inline std::vector<double> frequencies(const Histogram& h, int width, long shots) {
  std::vector<double> f(std::size_t{1} << width, 0.0);
  for (const auto& [label, count] : h) f[basis_index(label)] = double(count) / double(shots);
  return f;
}

}  // namespace symtrot
