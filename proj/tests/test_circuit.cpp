#include <catch2/catch_amalgamated.hpp>

#include "symtrot/circuit.hpp"
#include "symtrot/executor.hpp"
#include "symtrot/noise.hpp"
#include "symtrot/rng.hpp"

using namespace symtrot;

namespace {
Circuit random_circuit(Pcg32& rng, int width, int depth) {
  Circuit c(width);
  for (int i = 0; i < depth; ++i) {
    int pick = static_cast<int>(rng.below(8));
    int q = static_cast<int>(rng.below(width));
    double a = 2 * kPi * rng.uniform01() - kPi;
    switch (pick) {
      case 0: c.rx(q, a); break;
      case 1: c.ry(q, a); break;
      case 2: c.rz(q, a); break;
      case 3: c.x(q); break;
      case 4: c.z(q); break;
      case 5: c.h(q); break;
      default: {
        if (width < 2) { c.y(q); break; }
        int t = static_cast<int>(rng.below(width - 1));
        if (t >= q) ++t;
        c.cnot(q, t);
        break;
      }
    }
  }
  return c;
}
}  // namespace

TEST_CASE("empty circuit leaves a basis state alone") {
  Circuit c(3);
  StateVector in = StateVector::basis(3, "011");
  StateVector out = apply(c, in);
  REQUIRE(std::abs(out.amps[basis_index("011")] - cxd(1, 0)) < 1e-15);
}

TEST_CASE("X on qubit 0 flips site 1") {
  Circuit c(3);
  c.x(0);
  StateVector out = apply(c, StateVector::basis(3, "000"));
  REQUIRE(std::abs(out.amps[basis_index("100")] - cxd(1, 0)) < 1e-15);
}

TEST_CASE("CNOT turns a superposed control into a Bell pair") {
  Circuit c(2);
  c.h(0).cnot(0, 1);
  StateVector out = apply(c, StateVector::basis(2, "00"));
  REQUIRE(std::abs(out.amps[basis_index("00")] - 1.0 / std::sqrt(2.0)) < 1e-12);
  REQUIRE(std::abs(out.amps[basis_index("11")] - 1.0 / std::sqrt(2.0)) < 1e-12);
  REQUIRE(std::abs(out.amps[basis_index("01")]) < 1e-15);
  REQUIRE(std::abs(out.amps[basis_index("10")]) < 1e-15);
}

TEST_CASE("apply preserves the norm") {
  Pcg32 rng(5);
  for (int t = 0; t < 10; ++t) {
    Circuit c = random_circuit(rng, 3, 25);
    StateVector out = apply(c, StateVector::basis(3, "010"));
    REQUIRE(std::abs(out.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("apply rejects width mismatch") {
  Circuit c(3);
  StateVector s(2);
  REQUIRE_THROWS_AS(apply(c, s), std::invalid_argument);
}

TEST_CASE("CNOT pair is an involution") {
  Circuit c(2);
  c.cnot(0, 1).cnot(0, 1);
  REQUIRE(max_abs(unitary_of(c) - CMatrix::Identity(4, 4)) < 1e-15);
}

TEST_CASE("unitary_of respects composition") {
  Pcg32 rng(17);
  for (int t = 0; t < 10; ++t) {
    Circuit a = random_circuit(rng, 3, 15);
    Circuit b = random_circuit(rng, 3, 15);
    Circuit ab = a;
    ab.append(b);
    REQUIRE(max_abs(unitary_of(ab) - unitary_of(b) * unitary_of(a)) < 1e-11);
  }
}

TEST_CASE("apply agrees with the unitary on random circuits") {
  Pcg32 rng(23);
  for (int t = 0; t < 100; ++t) {
    int width = 2 + static_cast<int>(rng.below(3));
    Circuit c = random_circuit(rng, width, 1 + static_cast<int>(rng.below(30)));
    CMatrix u = unitary_of(c);
    REQUIRE(is_unitary(u, 1e-10));
    StateVector in(width);
    for (auto& a : in.amps) a = cxd(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
    double n = in.norm();
    for (auto& a : in.amps) a /= n;
    StateVector out = apply(c, in);
    CVector expect = u * in.as_vector();
    REQUIRE((out.as_vector() - expect).norm() < 1e-9);
  }
}

TEST_CASE("global phase participates in unitary_of") {
  Circuit c(1);
  c.global_phase = kPi / 3;
  CMatrix u = unitary_of(c);
  REQUIRE(max_abs(u - std::exp(cxd(0, kPi / 3)) * CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("null-noise density evolution matches the statevector outer product") {
  Pcg32 rng(31);
  for (int t = 0; t < 5; ++t) {
    Circuit c = random_circuit(rng, 3, 20);
    StateVector psi = apply(c, StateVector(3));
    DensityMatrix rho = evolve_density(c, DensityMatrix(3));
    CVector v = psi.as_vector();
    REQUIRE(max_abs(rho.rho - CMatrix(v * v.adjoint())) < 1e-10);
    REQUIRE(std::abs(rho.trace_real() - 1.0) < 1e-10);
  }
}

TEST_CASE("fully depolarizing two-qubit noise after one CNOT gives I/4") {
  NoiseModel n;
  n.p2 = 1.0;
  Circuit c(2);
  c.cnot(0, 1);
  DensityMatrix in = DensityMatrix::from_state(apply(Circuit(2).h(0), StateVector(2)));
  DensityMatrix out = evolve_density(c, in, n);
  REQUIRE(max_abs(out.rho - CMatrix::Identity(4, 4) / 4.0) < 1e-12);
}

TEST_CASE("purity decreases monotonically with each noisy CNOT") {
  // closed-form recursion for a two-qubit register under the global
  // depolarizing channel: P' = (1-p)^2 P + p(1-p)/2 + p^2/4
  const double p = 0.01;
  double pur = 1.0;
  std::vector<double> expect;
  for (int k = 0; k < 6; ++k) {
    expect.push_back(pur);
    pur = (1 - p) * (1 - p) * pur + 2 * (1 - p) * p / 4 + p * p / 4;
  }
  NoiseModel n;
  n.p2 = p;
  DensityMatrix rho = DensityMatrix::from_state(StateVector::basis(2, "00"));
  for (int k = 0; k < 6; ++k) {
    REQUIRE(std::abs(rho.purity() - expect[static_cast<std::size_t>(k)]) < 1e-12);
    if (k > 0) REQUIRE(rho.purity() < expect[static_cast<std::size_t>(k - 1)]);
    Circuit c(2);
    c.cnot(0, 1);
    rho = evolve_density(c, rho, n);
  }
}

TEST_CASE("sampling a basis state returns every shot on its label") {
  Histogram h = sample_counts(StateVector::basis(3, "000"), 8192, {}, 1);
  REQUIRE(h.size() == 1);
  REQUIRE(h.at("000") == 8192);
}

TEST_CASE("uniform one-qubit superposition sampling within binomial bounds") {
  StateVector psi(1);
  psi.amps = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  Histogram h = sample_counts(psi, 1000000, {}, 42);
  double f1 = double(h.at("1")) / 1e6;
  REQUIRE(std::abs(f1 - 0.5) < 0.002);  // 3 sigma envelope
  long total = 0;
  for (const auto& [k, v] : h) total += v;
  REQUIRE(total == 1000000);
}

TEST_CASE("readout flip probability shows up in the sampled frequency") {
  std::vector<ReadoutConfusion> r = {ReadoutConfusion::from_flip_probs(0.05, 0.0)};
  Histogram h = sample_counts(StateVector::basis(1, "0"), 1000000, r, 7);
  double f1 = double(h.at("1")) / 1e6;
  REQUIRE(std::abs(f1 - 0.05) < 0.001);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  StateVector psi(2);
  psi.amps = {0.5, 0.5, 0.5, 0.5};
  Histogram a = sample_counts(psi, 4096, {}, 1234);
  Histogram b = sample_counts(psi, 4096, {}, 1234);
  Histogram c = sample_counts(psi, 4096, {}, 1235);
  REQUIRE(a == b);
  REQUIRE(a != c);
}

TEST_CASE("circuit text round-trips") {
  Pcg32 rng(77);
  for (int t = 0; t < 20; ++t) {
    Circuit c = random_circuit(rng, 3, 12);
    c.global_phase = 0.25;
    Circuit back = from_text(to_text(c));
    REQUIRE(back.width == c.width);
    REQUIRE(back.gates.size() == c.gates.size());
    REQUIRE(max_abs(unitary_of(back) - unitary_of(c)) < 1e-12);
  }
}

TEST_CASE("circuit text accepts comments and infers width") {
  Circuit c = from_text("# a comment\nH 0\nCNOT 0,2\nRZ 1,0.5 # trailing\n");
  REQUIRE(c.width == 3);
  REQUIRE(c.gates.size() == 3);
  REQUIRE(c.gates[1].kind == GateKind::CNOT);
  REQUIRE(c.gates[2].angle == Catch::Approx(0.5));
}

TEST_CASE("gate validation rejects bad input") {
  Circuit c(2);
  REQUIRE_THROWS_AS(c.cnot(0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(c.x(5), std::invalid_argument);
  REQUIRE_THROWS_AS(c.rx(0, std::nan("")), std::invalid_argument);
}
