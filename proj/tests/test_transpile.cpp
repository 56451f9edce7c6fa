#include <catch2/catch_amalgamated.hpp>

#include "symtrot/kak.hpp"
#include "symtrot/rng.hpp"
#include "symtrot/transpile.hpp"
#include "symtrot/trotter.hpp"

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
        if (width < 2) { c.z(q); break; }
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

TEST_CASE("same-axis rotations merge") {
  Circuit c(1);
  c.rz(0, 0.4).rz(0, 0.6);
  Circuit out = fuse_rotations(c);
  REQUIRE(out.gates.size() == 1);
  REQUIRE(out.gates[0].angle == Catch::Approx(1.0));
}

TEST_CASE("inverse rotations cancel to nothing") {
  Circuit c(1);
  c.rx(0, kPi).rx(0, -kPi);
  Circuit out = fuse_rotations(c);
  REQUIRE(out.gates.empty());
}

TEST_CASE("fusion across an unrelated wire still merges") {
  Circuit c(2);
  c.rz(0, 0.3).h(1).rz(0, 0.5);
  Circuit out = fuse_rotations(c);
  REQUIRE(out.gates.size() == 2);
}

TEST_CASE("fusion preserves the unitary on random circuits") {
  Pcg32 rng(3);
  for (int t = 0; t < 10; ++t) {
    Circuit c = random_circuit(rng, 2, 50);
    REQUIRE(max_abs(unitary_of(fuse_rotations(c)) - unitary_of(c)) < 1e-10);
  }
}

TEST_CASE("adjacent identical CNOTs cancel") {
  Circuit c(2);
  c.cnot(0, 1).cnot(0, 1);
  REQUIRE(cancel_cnots(c).gates.empty());
}

TEST_CASE("RZ on the control commutes through and the pair cancels") {
  Circuit c(2);
  c.cnot(0, 1).rz(0, 0.7).cnot(0, 1);
  Circuit out = cancel_cnots(c);
  REQUIRE(out.gates.size() == 1);
  REQUIRE(out.gates[0].kind == GateKind::RZ);
  REQUIRE(max_abs(unitary_of(out) - unitary_of(c)) < 1e-12);
}

TEST_CASE("RX on the target commutes through and the pair cancels") {
  Circuit c(2);
  c.cnot(0, 1).rx(1, 0.7).cnot(0, 1);
  REQUIRE(cancel_cnots(c).gates.size() == 1);
}

TEST_CASE("blocking gates keep the pair in place") {
  Circuit c(2);
  c.cnot(0, 1).rx(0, 0.7).cnot(0, 1);  // RX on the control blocks
  REQUIRE(cancel_cnots(c).gates.size() == 3);
  Circuit d(2);
  d.cnot(0, 1).cnot(1, 0);  // opposite orientation
  REQUIRE(cancel_cnots(d).gates.size() == 2);
}

TEST_CASE("cancellation preserves the unitary on random circuits") {
  Pcg32 rng(13);
  for (int t = 0; t < 10; ++t) {
    Circuit c = random_circuit(rng, 3, 40);
    REQUIRE(max_abs(unitary_of(cancel_cnots(c)) - unitary_of(c)) < 1e-10);
  }
}

TEST_CASE("a lone Hadamard resynthesizes to at most three rotations") {
  Circuit c(1);
  c.h(0);
  Circuit out = resynthesize_1q(c);
  REQUIRE(out.gates.size() <= 3);
  for (const auto& g : out.gates) REQUIRE(is_rotation(g.kind));
  REQUIRE(phase_distance(unitary_of(out), unitary_of(c)) < 1e-12);
}

TEST_CASE("a run of ten rotations collapses to at most three") {
  Pcg32 rng(29);
  Circuit c(1);
  for (int i = 0; i < 10; ++i) {
    int k = static_cast<int>(rng.below(3));
    double a = 2 * kPi * rng.uniform01() - kPi;
    if (k == 0) c.rx(0, a);
    else if (k == 1) c.ry(0, a);
    else c.rz(0, a);
  }
  Circuit out = resynthesize_1q(c);
  REQUIRE(out.gates.size() <= 3);
  REQUIRE(max_abs(unitary_of(out) - unitary_of(c)) < 1e-10);
}

TEST_CASE("an empty wire stays empty") {
  Circuit c(2);
  REQUIRE(resynthesize_1q(c).gates.empty());
}

TEST_CASE("resynthesis keeps interleaved runs on separate wires intact") {
  Circuit c(2);
  c.h(0).h(1).cnot(0, 1).h(0).h(1);
  Circuit out = resynthesize_1q(c);
  REQUIRE(max_abs(unitary_of(out) - unitary_of(c)) < 1e-10);
}

TEST_CASE("kak decomposition reconstructs random two-qubit unitaries") {
  Pcg32 rng(51);
  for (int t = 0; t < 30; ++t) {
    Circuit c = random_circuit(rng, 2, 24);
    Eigen::Matrix4cd u = unitary_of(c);
    KakDecomposition kd = kak_decompose(u);  // throws if its self-check fails
    (void)kd;
  }
  // degenerate corners
  Circuit cn(2);
  cn.cnot(0, 1);
  kak_decompose(unitary_of(cn));
  kak_decompose(Eigen::Matrix4cd::Identity());
  Circuit sw(2);
  sw.swap(0, 1);
  kak_decompose(unitary_of(sw));
}

TEST_CASE("canonical chain realizes the Cartan exponential") {
  Pcg32 rng(52);
  for (int t = 0; t < 10; ++t) {
    double a = rng.uniform01() * 2 - 1, b = rng.uniform01() * 2 - 1, cc = rng.uniform01() * 2 - 1;
    Circuit c(2);
    emit_canonical_chain(c, a, b, cc, 0, 1);
    CMatrix gen = a * kron(pauli_x(), pauli_x()) + b * kron(pauli_y(), pauli_y()) +
                  cc * kron(pauli_z(), pauli_z());
    REQUIRE(max_abs(unitary_of(c) - expm_hermitian(gen, cxd(0, 1))) < 1e-10);
  }
}

TEST_CASE("consolidation rewrites a deep two-qubit block into four CNOTs") {
  Circuit c(2);
  for (int i = 0; i < 12; ++i) c.append(trotter_unit(0.21));
  Circuit out = consolidate_blocks(c);
  REQUIRE(out.cnot_count() == 4);
  REQUIRE(max_abs(unitary_of(out) - unitary_of(c)) < 1e-9);
}

TEST_CASE("every pass preserves the unitary up to phase on random circuits") {
  Pcg32 rng(200);
  using Pass = Circuit (*)(const Circuit&);
  const std::pair<const char*, Pass> passes[] = {
      {"fuse", &fuse_rotations},
      {"cancel", &cancel_cnots},
      {"resynth", &resynthesize_1q},
      {"consolidate", &consolidate_blocks}};
  for (int t = 0; t < 200; ++t) {
    int width = 2 + static_cast<int>(rng.below(3));
    Circuit c = random_circuit(rng, width, 10 + static_cast<int>(rng.below(51)));
    CMatrix u = unitary_of(c);
    for (const auto& [name, pass] : passes) {
      INFO(name << " seed-case " << t);
      REQUIRE(phase_distance(unitary_of(pass(c)), u) < 1e-9);
    }
  }
}

TEST_CASE("optimize converges and is structurally idempotent") {
  Pcg32 rng(77);
  for (int t = 0; t < 20; ++t) {
    Circuit c = random_circuit(rng, 3, 30);
    auto [o1, r1] = optimize(c);
    REQUIRE(r1.converged);
    auto [o2, r2] = optimize(o1);
    REQUIRE(o2.gates.size() == o1.gates.size());
    for (std::size_t i = 0; i < o1.gates.size(); ++i) {
      REQUIRE(o2.gates[i].kind == o1.gates[i].kind);
      REQUIRE(o2.gates[i].q0 == o1.gates[i].q0);
      REQUIRE(o2.gates[i].angle == o1.gates[i].angle);
    }
    REQUIRE(phase_distance(unitary_of(o1), unitary_of(c)) < 1e-9);
  }
}

TEST_CASE("optimize reports no reduction on an already-optimal circuit") {
  Circuit c(2);
  c.rz(0, 0.4).cnot(0, 1).rx(1, 0.9);
  auto [opt, report] = optimize(c);
  REQUIRE(report.input_cnots == report.output_cnots);
  REQUIRE(opt.gates.size() == c.gates.size());
}

TEST_CASE("optimized CNOT count of the evolution body is independent of n") {
  // fixed per-step angle, so the repeated unit is the same gate sequence
  std::map<int, int> counts;
  for (int n : {4, 15, 30, 100}) {
    Circuit body(2);
    for (int i = 0; i < n; ++i) body.append(trotter_unit(0.3));
    auto [opt, report] = optimize(body);
    counts[n] = report.output_cnots;
    REQUIRE(phase_distance(unitary_of(opt), unitary_of(body)) < 1e-9);
  }
  REQUIRE(counts[4] == counts[15]);
  REQUIRE(counts[15] == counts[30]);
  REQUIRE(counts[30] == counts[100]);
  // a single unit is already below the canonical-chain budget and stays put
  Circuit one(2);
  one.append(trotter_unit(0.3));
  auto [opt1, report1] = optimize(one);
  REQUIRE(report1.output_cnots == 2);
}

TEST_CASE("pass report serializes to json") {
  Circuit c(2);
  c.cnot(0, 1).cnot(0, 1);
  auto [opt, report] = optimize(c);
  auto j = report.to_json();
  REQUIRE(j["input_cnots"] == 2);
  REQUIRE(j["output_cnots"] == 0);
  REQUIRE(j["converged"] == true);
}
