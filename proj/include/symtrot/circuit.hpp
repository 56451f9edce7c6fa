#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "symtrot/numerics.hpp"

namespace symtrot {

// Index convention used across the project: chain site i (1-based) is qubit
// i-1, and qubit q is bit q of the amplitude index.  Basis labels are written
// site-major, site 1 first, so |011> means site pattern (0,1,1) and lives at
// amplitude index 0b110 = 6.

enum class GateKind { RX, RY, RZ, X, Y, Z, H, CNOT, SWAP, Barrier };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::Barrier: return "BARRIER";
  }
  return "?";
}

inline bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

inline bool is_two_qubit(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::SWAP;
}

struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;       // second qubit for CNOT (target) / SWAP
  double angle = 0;  // rotation kinds only

  static Gate rx(int q, double a) { return {GateKind::RX, q, -1, a}; }
  static Gate ry(int q, double a) { return {GateKind::RY, q, -1, a}; }
  static Gate rz(int q, double a) { return {GateKind::RZ, q, -1, a}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0}; }
  static Gate y(int q) { return {GateKind::Y, q, -1, 0}; }
  static Gate z(int q) { return {GateKind::Z, q, -1, 0}; }
  static Gate h(int q) { return {GateKind::H, q, -1, 0}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0}; }
  static Gate swap(int a, int b) { return {GateKind::SWAP, a, b, 0}; }
  static Gate barrier() { return {GateKind::Barrier, 0, -1, 0}; }
};

struct Circuit {
  int width = 0;
  std::vector<Gate> gates;
  double global_phase = 0.0;  // radians; unitary_of includes e^{i*phase}
  std::map<std::string, std::string> metadata;

  Circuit() = default;
  explicit Circuit(int w) : width(w) {}

  Circuit& add(const Gate& g) {
    validate_gate(g);
    gates.push_back(g);
    return *this;
  }
  Circuit& rx(int q, double a) { return add(Gate::rx(q, a)); }
  Circuit& ry(int q, double a) { return add(Gate::ry(q, a)); }
  Circuit& rz(int q, double a) { return add(Gate::rz(q, a)); }
  Circuit& x(int q) { return add(Gate::x(q)); }
  Circuit& y(int q) { return add(Gate::y(q)); }
  Circuit& z(int q) { return add(Gate::z(q)); }
  Circuit& h(int q) { return add(Gate::h(q)); }
  Circuit& cnot(int c, int t) { return add(Gate::cnot(c, t)); }
  Circuit& swap(int a, int b) { return add(Gate::swap(a, b)); }
  Circuit& barrier() { return add(Gate::barrier()); }

  Circuit& append(const Circuit& other) {
    if (other.width > width)
      throw std::invalid_argument("append: circuit width mismatch");
    for (const auto& g : other.gates) gates.push_back(g);
    global_phase += other.global_phase;
    return *this;
  }

  // Same gates with qubit indices shifted by `offset` into a wider register.
  Circuit embedded(int new_width, int offset) const {
    std::vector<int> map(width);
    for (int q = 0; q < width; ++q) map[q] = q + offset;
    return remapped(new_width, map);
  }

  // Same gates with qubit q sent to map[q].
  Circuit remapped(int new_width, const std::vector<int>& map) const {
    if (static_cast<int>(map.size()) != width)
      throw std::invalid_argument("remapped: map must cover every qubit");
    Circuit out(new_width);
    out.global_phase = global_phase;
    for (auto g : gates) {
      if (g.kind != GateKind::Barrier) {
        g.q0 = map.at(g.q0);
        if (g.q1 >= 0) g.q1 = map.at(g.q1);
      }
      out.add(g);
    }
    return out;
  }

  Circuit inverse() const {
    Circuit out(width);
    out.global_phase = -global_phase;
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
      Gate g = *it;
      if (is_rotation(g.kind)) g.angle = -g.angle;
      out.add(g);  // X,Y,Z,H,CNOT,SWAP are self-inverse
    }
    return out;
  }

  int cnot_count() const {
    int n = 0;
    for (const auto& g : gates)
      if (g.kind == GateKind::CNOT) ++n;
    return n;
  }

  // Layered depth; barriers synchronize all wires and count zero.
  int depth() const {
    std::vector<int> frontier(width, 0);
    int d = 0;
    for (const auto& g : gates) {
      if (g.kind == GateKind::Barrier) {
        for (auto& f : frontier) f = d;
        continue;
      }
      int start = frontier[g.q0];
      if (g.q1 >= 0) start = std::max(start, frontier[g.q1]);
      frontier[g.q0] = start + 1;
      if (g.q1 >= 0) frontier[g.q1] = start + 1;
      d = std::max(d, start + 1);
    }
    return d;
  }

 private:
  void validate_gate(const Gate& g) const {
    if (g.kind == GateKind::Barrier) return;
    if (g.q0 < 0 || g.q0 >= width)
      throw std::invalid_argument("gate qubit out of range");
    if (is_two_qubit(g.kind)) {
      if (g.q1 < 0 || g.q1 >= width || g.q1 == g.q0)
        throw std::invalid_argument("two-qubit gate needs distinct in-range qubits");
    }
    if (is_rotation(g.kind) && !std::isfinite(g.angle))
      throw std::invalid_argument("rotation angle must be finite");
  }
};

// --- basis labels -----------------------------------------------------------

inline std::size_t basis_index(const std::string& label) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == '1')
      idx |= (std::size_t{1} << i);
    else if (label[i] != '0')
      throw std::invalid_argument("basis label must be 0/1 characters");
  }
  return idx;
}

inline std::string index_label(std::size_t idx, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i)
    if ((idx >> i) & 1) s[i] = '1';
  return s;
}

// --- states -----------------------------------------------------------------

struct StateVector {
  int width = 0;
  std::vector<cxd> amps;

  explicit StateVector(int w) : width(w), amps(std::size_t{1} << w, cxd(0, 0)) {
    amps[0] = 1.0;
  }
  StateVector(int w, std::vector<cxd> a) : width(w), amps(std::move(a)) {
    if (amps.size() != (std::size_t{1} << w))
      throw std::invalid_argument("statevector length != 2^width");
  }

  static StateVector basis(int width, const std::string& label) {
    StateVector s(width);
    s.amps[0] = 0;
    s.amps.at(basis_index(label)) = 1.0;
    return s;
  }

  double norm() const {
    double n = 0;
    for (const auto& a : amps) n += std::norm(a);
    return std::sqrt(n);
  }

  CVector as_vector() const {
    CVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = amps[i];
    return v;
  }
};

inline cxd overlap(const StateVector& a, const StateVector& b) {
  if (a.width != b.width) throw std::invalid_argument("overlap: width mismatch");
  cxd s = 0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

// --- gate matrices and application ------------------------------------------

inline CMatrix gate_matrix_1q(GateKind k, double angle) {
  const cxd i1(0, 1);
  CMatrix m(2, 2);
  switch (k) {
    case GateKind::RX: {
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -i1 * s, -i1 * s, c;
      return m;
    }
    case GateKind::RY: {
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::RZ: {
      m << std::exp(-i1 * angle / 2.0), 0, 0, std::exp(i1 * angle / 2.0);
      return m;
    }
    case GateKind::X: return pauli_x();
    case GateKind::Y: return pauli_y();
    case GateKind::Z: return pauli_z();
    case GateKind::H: {
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    }
    default:
      throw std::invalid_argument("gate_matrix_1q: not a one-qubit gate");
  }
}

inline void apply_gate(const Gate& g, StateVector& psi) {
  const std::size_t dim = psi.amps.size();
  switch (g.kind) {
    case GateKind::Barrier:
      return;
    case GateKind::CNOT: {
      const std::size_t cbit = std::size_t{1} << g.q0;
      const std::size_t tbit = std::size_t{1} << g.q1;
      for (std::size_t x = 0; x < dim; ++x)
        if ((x & cbit) && !(x & tbit)) std::swap(psi.amps[x], psi.amps[x | tbit]);
      return;
    }
    case GateKind::SWAP: {
      const std::size_t a = std::size_t{1} << g.q0;
      const std::size_t b = std::size_t{1} << g.q1;
      for (std::size_t x = 0; x < dim; ++x)
        if ((x & a) && !(x & b)) std::swap(psi.amps[x], psi.amps[(x ^ a) | b]);
      return;
    }
    default: {
      const CMatrix u = gate_matrix_1q(g.kind, g.angle);
      const std::size_t bit = std::size_t{1} << g.q0;
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & bit) continue;
        cxd a0 = psi.amps[x], a1 = psi.amps[x | bit];
        psi.amps[x] = u(0, 0) * a0 + u(0, 1) * a1;
        psi.amps[x | bit] = u(1, 0) * a0 + u(1, 1) * a1;
      }
      return;
    }
  }
}

inline StateVector apply(const Circuit& c, const StateVector& in) {
  if (c.width != in.width)
    throw std::invalid_argument("apply: circuit and state widths differ");
  StateVector psi = in;
  for (const auto& g : c.gates) apply_gate(g, psi);
  if (c.global_phase != 0.0) {
    cxd ph = std::exp(cxd(0, c.global_phase));
    for (auto& a : psi.amps) a *= ph;
  }
  return psi;
}

// Full matrix of the circuit (incl. global phase); barriers contribute
// nothing.  Columns are the images of the computational basis states.
inline CMatrix unitary_of(const Circuit& c) {
  if (c.width > 8)
    throw std::invalid_argument("unitary_of: width capped at 8");
  const std::size_t dim = std::size_t{1} << c.width;
  CMatrix u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector e(c.width);
    e.amps[0] = 0;
    e.amps[col] = 1.0;
    StateVector out = apply(c, e);
    for (std::size_t row = 0; row < dim; ++row)
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = out.amps[row];
  }
  return u;
}

// --- text serialization -------------------------------------------------
// One gate per line: "GATE q[,q2][,angle]"; '#' starts a comment.  Width and
// accumulated global phase ride along as pragma comments so files round-trip.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_text(const Circuit& c) {
  std::ostringstream os;
  os << "# qubits: " << c.width << "\n";
  if (c.global_phase != 0.0) os << "# phase: " << format_double(c.global_phase) << "\n";
  for (const auto& g : c.gates) {
    os << gate_name(g.kind);
    if (g.kind == GateKind::Barrier) {
      os << "\n";
      continue;
    }
    os << ' ' << g.q0;
    if (g.q1 >= 0) os << ',' << g.q1;
    if (is_rotation(g.kind)) os << ',' << format_double(g.angle);
    os << "\n";
  }
  return os.str();
}

inline Circuit from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int width = -1;
  double phase = 0;
  std::vector<std::string> body;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    std::string comment = hash == std::string::npos ? "" : line.substr(hash + 1);
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (comment.find("qubits:") != std::string::npos)
      width = std::stoi(comment.substr(comment.find(':') + 1));
    if (comment.find("phase:") != std::string::npos)
      phase = std::stod(comment.substr(comment.find(':') + 1));
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
      line.pop_back();
    if (!line.empty()) body.push_back(line);
  }
  // infer width when no pragma present
  auto parse_fields = [](const std::string& l, std::string& name, std::vector<std::string>& fs) {
    std::istringstream ls(l);
    ls >> name;
    std::string rest;
    std::getline(ls, rest);
    fs.clear();
    std::string cur;
    for (char ch : rest) {
      if (ch == ',') {
        fs.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) fs.push_back(cur);
  };
  if (width < 0) {
    int maxq = -1;
    for (const auto& l : body) {
      std::string name;
      std::vector<std::string> fs;
      parse_fields(l, name, fs);
      if (name == "BARRIER") continue;
      if (!fs.empty()) maxq = std::max(maxq, std::stoi(fs[0]));
      if (name == "CNOT" || name == "SWAP")
        if (fs.size() > 1) maxq = std::max(maxq, std::stoi(fs[1]));
    }
    width = maxq + 1;
  }
  Circuit c(width);
  c.global_phase = phase;
  for (const auto& l : body) {
    std::string name;
    std::vector<std::string> fs;
    parse_fields(l, name, fs);
    GateKind kind;
    if (name == "RX") kind = GateKind::RX;
    else if (name == "RY") kind = GateKind::RY;
    else if (name == "RZ") kind = GateKind::RZ;
    else if (name == "X") kind = GateKind::X;
    else if (name == "Y") kind = GateKind::Y;
    else if (name == "Z") kind = GateKind::Z;
    else if (name == "H") kind = GateKind::H;
    else if (name == "CNOT") kind = GateKind::CNOT;
    else if (name == "SWAP") kind = GateKind::SWAP;
    else if (name == "BARRIER") { c.barrier(); continue; }
    else throw std::invalid_argument("unknown gate in circuit text: " + name);
    Gate g;
    g.kind = kind;
    if (fs.empty()) throw std::invalid_argument("gate line missing qubit: " + l);
    g.q0 = std::stoi(fs[0]);
    std::size_t next = 1;
    if (is_two_qubit(kind)) {
      if (fs.size() < 2) throw std::invalid_argument("two-qubit gate needs two qubits: " + l);
      g.q1 = std::stoi(fs[1]);
      next = 2;
    }
    if (is_rotation(kind)) {
      if (fs.size() <= next) throw std::invalid_argument("rotation needs an angle: " + l);
      g.angle = std::stod(fs[next]);
    }
    c.add(g);
  }
  return c;
}

}  // namespace symtrot
