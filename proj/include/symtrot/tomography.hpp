#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "symtrot/circuit.hpp"
#include "symtrot/executor.hpp"
#include "symtrot/model.hpp"

namespace symtrot {

// Measurement settings are strings of per-site axes, site 1 first, e.g.
// "XYZ"; all 3^n of them, enumerated with site 1 cycling fastest.
inline std::vector<std::string> tomography_settings(int width) {
  static const char axes[3] = {'X', 'Y', 'Z'};
  std::vector<std::string> out;
  std::vector<int> digit(width, 0);
  while (true) {
    std::string s(width, 'X');
    for (int q = 0; q < width; ++q) s[q] = axes[digit[q]];
    out.push_back(s);
    int i = 0;
    for (; i < width; ++i) {
      if (++digit[i] < 3) break;
      digit[i] = 0;
    }
    if (i == width) break;
  }
  return out;
}

// Basis-change layer before a Z measurement: H for X, S+ then H for Y
// (S+ carried as RZ(-pi/2); the leftover phase is irrelevant to sampling).
inline Circuit with_measurement_basis(const Circuit& base, const std::string& setting) {
  if (static_cast<int>(setting.size()) != base.width)
    throw std::invalid_argument("setting length must equal circuit width");
  Circuit c = base;
  for (int q = 0; q < base.width; ++q) {
    switch (setting[q]) {
      case 'Z': break;
      case 'X': c.h(q); break;
      case 'Y': c.rz(q, -kPi / 2); c.h(q); break;
      default: throw std::invalid_argument("setting axes must be X, Y or Z");
    }
  }
  return c;
}

inline std::vector<std::pair<std::string, Circuit>> tomography_circuits(const Circuit& base) {
  std::vector<std::pair<std::string, Circuit>> out;
  for (const auto& s : tomography_settings(base.width))
    out.emplace_back(s, with_measurement_basis(base, s));
  return out;
}

// Pauli strings, site-major with 'I' allowed, e.g. "IXZ".
inline std::vector<std::string> pauli_strings(int width) {
  static const char axes[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<std::string> out;
  std::vector<int> digit(width, 0);
  while (true) {
    std::string s(width, 'I');
    for (int q = 0; q < width; ++q) s[q] = axes[digit[q]];
    out.push_back(s);
    int i = 0;
    for (; i < width; ++i) {
      if (++digit[i] < 4) break;
      digit[i] = 0;
    }
    if (i == width) break;
  }
  return out;
}

struct ExpectationTable {
  int width = 0;
  long shots_per_setting = 0;
  double scale_factor = 1.0;
  std::map<std::string, double> values;  // Pauli string -> estimate

  double at(const std::string& p) const {
    auto it = values.find(p);
    if (it == values.end()) throw std::invalid_argument("missing Pauli string: " + p);
    return it->second;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "pauli_string,value,shots,scale_factor\n";
    for (const auto& [p, v] : values)
      os << p << ',' << format_double(v) << ',' << shots_per_setting << ','
         << format_double(scale_factor) << '\n';
    return os.str();
  }
};

namespace tomo_detail {
inline bool compatible(const std::string& pauli, const std::string& setting) {
  for (std::size_t i = 0; i < pauli.size(); ++i)
    if (pauli[i] != 'I' && pauli[i] != setting[i]) return false;
  return true;
}
inline double parity_expectation(const std::vector<double>& freqs, const std::string& pauli,
                                 int width) {
  double e = 0;
  for (std::size_t x = 0; x < freqs.size(); ++x) {
    int par = 0;
    for (int q = 0; q < width; ++q)
      if (pauli[q] != 'I' && ((x >> q) & 1)) par ^= 1;
    e += par ? -freqs[x] : freqs[x];
  }
  return e;
}
}  // namespace tomo_detail

// Estimate every Pauli expectation from per-setting outcome distributions;
// identity-padded strings average uniformly over all compatible settings.
inline ExpectationTable estimate_expectations(
    const std::map<std::string, std::vector<double>>& freqs_by_setting, int width,
    long shots_per_setting = 0) {
  for (const auto& s : tomography_settings(width))
    if (!freqs_by_setting.count(s))
      throw std::invalid_argument("estimate_expectations: missing setting " + s);
  ExpectationTable t;
  t.width = width;
  t.shots_per_setting = shots_per_setting;
  for (const auto& p : pauli_strings(width)) {
    double acc = 0;
    int n = 0;
    for (const auto& [setting, freqs] : freqs_by_setting) {
      if (!tomo_detail::compatible(p, setting)) continue;
      acc += tomo_detail::parity_expectation(freqs, p, width);
      ++n;
    }
    t.values[p] = n ? acc / n : 0.0;
  }
  return t;
}

// Analytic twin: exact Tr(rho P) for every Pauli string.
inline ExpectationTable exact_expectations(const DensityMatrix& dm) {
  ExpectationTable t;
  t.width = dm.width;
  for (const auto& p : pauli_strings(dm.width)) {
    PauliSum ps(dm.width);
    std::map<int, Axis> letters;
    for (int q = 0; q < dm.width; ++q) {
      if (p[q] == 'I') continue;
      letters[q + 1] = p[q] == 'X' ? Axis::X : p[q] == 'Y' ? Axis::Y : Axis::Z;
    }
    ps.add(1.0, letters);
    t.values[p] = (ps.to_matrix() * dm.rho).trace().real();
  }
  return t;
}

// rho = 2^-n sum_P <P> P ; Hermitian and trace one by construction, possibly
// indefinite before the maximum-likelihood projection.
inline DensityMatrix reconstruct_linear(const ExpectationTable& t) {
  const int n = t.width;
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& [p, v] : t.values) {
    PauliSum ps(n);
    std::map<int, Axis> letters;
    for (int q = 0; q < n; ++q) {
      if (p[q] == 'I') continue;
      letters[q + 1] = p[q] == 'X' ? Axis::X : p[q] == 'Y' ? Axis::Y : Axis::Z;
    }
    ps.add(1.0, letters);
    rho += v * ps.to_matrix();
  }
  rho /= double(dim);
  return DensityMatrix(n, rho);
}

// Fast maximum-likelihood projection: zero out negative eigenvalues in
// ascending order, spreading the accumulated deficit uniformly over the
// remaining ones; equals the Frobenius-nearest PSD trace-1 matrix.
inline DensityMatrix project_mle(const DensityMatrix& in) {
  if (!is_hermitian(in.rho, 1e-9))
    throw std::invalid_argument("project_mle: input must be Hermitian");
  if (std::abs(in.rho.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("project_mle: input must have trace 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(in.rho);
  Eigen::VectorXd lam = es.eigenvalues();  // ascending
  const Eigen::Index d = lam.size();
  double deficit = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double remaining = double(d - i);
    if (lam[i] + deficit / remaining < 0) {
      deficit += lam[i];
      lam[i] = 0;
    } else {
      for (Eigen::Index j = i; j < d; ++j) lam[j] += deficit / remaining;
      break;
    }
  }
  CMatrix rho = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(in.width, rho);
}

// F = <psi| rho |psi> for a pure target; the state must already be physical.
inline double fidelity(const DensityMatrix& rho, const StateVector& target) {
  if (rho.width != target.width) throw std::invalid_argument("fidelity: width mismatch");
  rho.validate(1e-9);
  CVector v = target.as_vector();
  double f = (v.adjoint() * rho.rho * v)(0, 0).real();
  if (f < -1e-9 || f > 1 + 1e-9)
    throw std::runtime_error("fidelity: result outside [0,1]");
  return f;
}

}  // namespace symtrot
