#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symtrot/circuit.hpp"
#include "symtrot/numerics.hpp"
#include "symtrot/rng.hpp"

namespace symtrot {

// 2x2 column-stochastic confusion matrix: column j = outcome distribution
// when the true bit is j, i.e. m(i,j) = p(read i | true j).
struct ReadoutConfusion {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();

  static ReadoutConfusion from_flip_probs(double p10, double p01) {
    // p10 = p(read 1 | true 0), p01 = p(read 0 | true 1)
    ReadoutConfusion r;
    r.m << 1 - p10, p01, p10, 1 - p01;
    return r;
  }
  bool is_identity() const {
    return (m - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15;
  }
  void validate() const {
    for (int j = 0; j < 2; ++j) {
      if (m(0, j) < 0 || m(1, j) < 0)
        throw std::invalid_argument("confusion matrix entries must be >= 0");
      if (std::abs(m(0, j) + m(1, j) - 1.0) > 1e-12)
        throw std::invalid_argument("confusion matrix columns must sum to 1");
    }
  }
};

struct NoiseModel {
  double p1 = 0.0;  // depolarizing probability after each 1-qubit gate
  double p2 = 0.0;  // depolarizing probability after each 2-qubit gate
  std::vector<ReadoutConfusion> readout;  // per qubit; empty = ideal

  static NoiseModel ideal() { return NoiseModel{}; }

  // Artifact default parameters (not taken from any published device data):
  // chosen as a plausible transmon-like setting with asymmetric readout.
  static NoiseModel preset_default(int width) {
    NoiseModel n;
    n.p1 = 0.001;
    n.p2 = 0.01;
    n.readout.assign(width, ReadoutConfusion::from_flip_probs(0.02, 0.04));
    return n;
  }

  bool is_null() const {
    if (p1 != 0 || p2 != 0) return false;
    for (const auto& r : readout)
      if (!r.is_identity()) return false;
    return true;
  }
  bool has_readout_noise() const {
    for (const auto& r : readout)
      if (!r.is_identity()) return true;
    return false;
  }
  void validate() const {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1)
      throw std::invalid_argument("depolarizing probabilities must lie in [0,1]");
    for (const auto& r : readout) r.validate();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["p1"] = p1;
    j["p2"] = p2;
    auto arr = nlohmann::json::array();
    for (const auto& r : readout)
      arr.push_back({{r.m(0, 0), r.m(0, 1)}, {r.m(1, 0), r.m(1, 1)}});
    j["readout"] = arr;
    return j;
  }
  static NoiseModel from_json(const nlohmann::json& j) {
    NoiseModel n;
    n.p1 = j.value("p1", 0.0);
    n.p2 = j.value("p2", 0.0);
    if (j.contains("readout")) {
      for (const auto& rj : j["readout"]) {
        ReadoutConfusion r;
        r.m << rj[0][0].get<double>(), rj[0][1].get<double>(),
            rj[1][0].get<double>(), rj[1][1].get<double>();
        n.readout.push_back(r);
      }
    }
    n.validate();
    return n;
  }
};

// --- density matrices ---------------------------------------------------

struct DensityMatrix {
  int width = 0;
  CMatrix rho;

  explicit DensityMatrix(int w) : width(w) {
    const Eigen::Index d = Eigen::Index{1} << w;
    rho = CMatrix::Zero(d, d);
    rho(0, 0) = 1.0;
  }
  DensityMatrix(int w, CMatrix m) : width(w), rho(std::move(m)) {
    if (rho.rows() != (Eigen::Index{1} << w) || rho.cols() != rho.rows())
      throw std::invalid_argument("density matrix dimension != 2^width");
  }

  static DensityMatrix from_state(const StateVector& psi) {
    CVector v = psi.as_vector();
    return DensityMatrix(psi.width, v * v.adjoint());
  }

  double trace_real() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }

  void validate(double tol = 1e-9) const {
    if (!is_hermitian(rho, 1e-10))
      throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(trace_real() - 1.0) > 1e-10)
      throw std::invalid_argument("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    if (es.eigenvalues().minCoeff() < -tol)
      throw std::invalid_argument("density matrix has negative eigenvalues");
  }
};

// rho -> (1-p) rho + p * (Tr_qubits rho) (x) I/2^k on `qubits`
inline DensityMatrix depolarize(const DensityMatrix& in, const std::vector<int>& qubits,
                                double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("depolarize: p must lie in [0,1]");
  for (int q : qubits)
    if (q < 0 || q >= in.width) throw std::invalid_argument("depolarize: qubit out of range");
  if (p == 0 || qubits.empty()) return in;

  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  const std::size_t dim = std::size_t{1} << in.width;
  const int k = static_cast<int>(qubits.size());
  const double inv = 1.0 / (1 << k);

  // mixed = (Tr_qubits rho) (x) I/2^k, written back on the same qubit slots
  CMatrix mixed = CMatrix::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (((r ^ c) & mask) != 0) continue;  // diagonal on the traced qubits
      cxd acc = 0;
      // sum over the traced qubits' configurations
      std::size_t sub = 0;
      do {
        acc += in.rho((r & ~mask) | sub, (c & ~mask) | sub);
        sub = (sub - mask) & mask;  // enumerate submasks of mask
      } while (sub != 0);
      mixed(r, c) = acc * inv;
    }
  }
  return DensityMatrix(in.width, (1 - p) * in.rho + p * mixed);
}

// --- Pauli twirling -------------------------------------------------------

struct TwirledEnsemble {
  std::vector<Circuit> circuits;
  std::uint64_t seed = 0;
  int twirls = 0;
};

namespace detail {
// CNOT (P_c (x) P_t) CNOT = sign * (Q_c (x) Q_t); index 0..3 = I,X,Y,Z.
// Verified against 4x4 matrix multiplication in the test suite.
struct TwirlEntry {
  int post_c, post_t, sign;
};
inline const std::array<std::array<TwirlEntry, 4>, 4>& twirl_table() {
  static const std::array<std::array<TwirlEntry, 4>, 4> t = {{
      // control I        X               Y               Z   (target index inside)
      {{{0, 0, +1}, {0, 1, +1}, {3, 2, +1}, {3, 3, +1}}},   // control I,  target I,X,Y,Z
      {{{1, 1, +1}, {1, 0, +1}, {2, 3, +1}, {2, 2, -1}}},   // control X
      {{{2, 1, +1}, {2, 0, +1}, {1, 3, -1}, {1, 2, +1}}},   // control Y
      {{{3, 0, +1}, {3, 1, +1}, {0, 2, +1}, {0, 3, +1}}},   // control Z
  }};
  return t;
}
inline void push_pauli(Circuit& c, int idx, int q) {
  switch (idx) {
    case 1: c.x(q); break;
    case 2: c.y(q); break;
    case 3: c.z(q); break;
    default: break;
  }
}
}  // namespace detail

// Wrap every CNOT in random Pauli pairs plus the compensating pair chosen
// from the CNOT conjugation table; each member equals the base circuit up to
// a global phase.
inline TwirledEnsemble twirl(const Circuit& base, int twirls, std::uint64_t seed) {
  if (twirls < 1) throw std::invalid_argument("twirl: need at least one member");
  TwirledEnsemble ens;
  ens.seed = seed;
  ens.twirls = twirls;
  for (int m = 0; m < twirls; ++m) {
    Pcg32 rng = derive_stream(seed, "twirl", static_cast<std::uint64_t>(m));
    Circuit c(base.width);
    c.global_phase = base.global_phase;
    c.metadata = base.metadata;
    for (const auto& g : base.gates) {
      if (g.kind != GateKind::CNOT) {
        c.add(g);
        continue;
      }
      int a = static_cast<int>(rng.below(4));
      int b = static_cast<int>(rng.below(4));
      const auto& e = detail::twirl_table()[a][b];
      detail::push_pauli(c, a, g.q0);
      detail::push_pauli(c, b, g.q1);
      c.add(g);
      detail::push_pauli(c, e.post_c, g.q0);
      detail::push_pauli(c, e.post_t, g.q1);
      if (e.sign < 0) c.global_phase += kPi;
    }
    ens.circuits.push_back(std::move(c));
  }
  return ens;
}

}  // namespace symtrot
