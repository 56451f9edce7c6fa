#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "symtrot/circuit.hpp"
#include "symtrot/executor.hpp"
#include "symtrot/noise.hpp"

namespace symtrot {

// Column j = empirical outcome distribution when basis state j is prepared.
struct AssignmentMatrix {
  Eigen::MatrixXd m;
  long shots_per_state = 0;

  int width() const {
    int w = 0;
    while ((Eigen::Index{1} << w) < m.rows()) ++w;
    return w;
  }

  double condition_number() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double smin = svd.singularValues().minCoeff();
    if (smin <= 0) return std::numeric_limits<double>::infinity();
    return svd.singularValues().maxCoeff() / smin;
  }

  std::string to_csv() const {
    std::ostringstream os;
    const int w = width();
    os << "outcome";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << ',' << index_label(static_cast<std::size_t>(j), w);
    os << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      os << index_label(static_cast<std::size_t>(i), w);
      for (Eigen::Index j = 0; j < m.cols(); ++j) os << ',' << format_double(m(i, j));
      os << '\n';
    }
    return os.str();
  }
};

// Prepare each basis state, push it through the readout model, sample, and
// record the empirical column.
inline AssignmentMatrix calibrate(const NoiseModel& noise, int n_qubits, long shots,
                                  std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("calibrate: shots must be >= 1");
  noise.validate();
  const std::size_t dim = std::size_t{1} << n_qubits;
  AssignmentMatrix am;
  am.shots_per_state = shots;
  am.m = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    StateVector psi(n_qubits);
    psi.amps[0] = 0;
    psi.amps[j] = 1.0;
    Pcg32 rng = derive_stream(seed, "calibrate", j);
    auto p = apply_readout(born_probabilities(psi), noise.readout, n_qubits);
    Histogram h = sample_probabilities(p, n_qubits, shots, rng);
    for (const auto& [label, count] : h)
      am.m(static_cast<Eigen::Index>(basis_index(label)), static_cast<Eigen::Index>(j)) =
          double(count) / double(shots);
  }
  return am;
}

// Analytic assignment matrix: the Kronecker product of per-qubit confusion
// matrices (used as the oracle in tests and for exact mitigation).
inline AssignmentMatrix assignment_from_confusions(const std::vector<ReadoutConfusion>& rs) {
  AssignmentMatrix am;
  am.m = Eigen::MatrixXd::Ones(1, 1);
  // qubit 0 is the least significant index bit, so it is the innermost factor
  for (auto it = rs.rbegin(); it != rs.rend(); ++it) {
    Eigen::MatrixXd next(am.m.rows() * 2, am.m.cols() * 2);
    for (Eigen::Index i = 0; i < am.m.rows(); ++i)
      for (Eigen::Index j = 0; j < am.m.cols(); ++j)
        next.block(i * 2, j * 2, 2, 2) = am.m(i, j) * it->m;
    am.m = std::move(next);
  }
  am.shots_per_state = 0;
  return am;
}

// Euclidean projection onto the probability simplex (sort-based algorithm).
inline std::vector<double> project_simplex(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0;
  double theta = 0;
  int k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / double(i + 1);
    if (u[i] - t > 0) {
      theta = t;
      k = static_cast<int>(i + 1);
    }
  }
  (void)k;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

// Solve A x = noisy, then repair physicality by projecting onto the simplex.
inline std::vector<double> mitigate_counts(const AssignmentMatrix& a,
                                           const std::vector<double>& noisy) {
  if (static_cast<Eigen::Index>(noisy.size()) != a.m.rows())
    throw std::invalid_argument("mitigate_counts: dimension mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.m);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "mitigate_counts: assignment matrix is singular (condition number "
       << a.condition_number() << ")";
    throw std::runtime_error(os.str());
  }
  Eigen::VectorXd b(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) b[static_cast<Eigen::Index>(i)] = noisy[i];
  Eigen::VectorXd x = lu.solve(b);
  std::vector<double> xv(x.data(), x.data() + x.size());
  return project_simplex(xv);
}

// --- zero-noise extrapolation ----------------------------------------------

struct ZneSchedule {
  std::vector<double> scale_factors = {1.0, 2.0, 3.0};

  void validate() const {
    if (scale_factors.empty()) throw std::invalid_argument("zne: empty schedule");
    bool has_one = false;
    for (double s : scale_factors) {
      if (s < 1.0) throw std::invalid_argument("zne: scale factors must be >= 1");
      if (std::abs(s - 1.0) < 1e-12) has_one = true;
    }
    for (std::size_t i = 0; i < scale_factors.size(); ++i)
      for (std::size_t j = i + 1; j < scale_factors.size(); ++j)
        if (std::abs(scale_factors[i] - scale_factors[j]) < 1e-12)
          throw std::invalid_argument("zne: scale factors must be distinct");
    if (!has_one) throw std::invalid_argument("zne: schedule must include 1.0");
  }
};

// Unitary folding.  Odd integer scales fold the whole circuit ((2k+1) copies
// alternating inverse/forward); other scales >= 1 fold the tail: the final
// ceil((s-1)/2 * L) gates are replayed as inverse+forward once.
inline Circuit fold(const Circuit& c, double scale) {
  if (scale < 1.0) throw std::invalid_argument("fold: scale must be >= 1");
  Circuit out = c;
  double rounded = std::round(scale);
  bool odd_integer = std::abs(scale - rounded) < 1e-12 && (long(rounded) % 2 == 1);
  if (odd_integer) {
    long k = (long(rounded) - 1) / 2;
    Circuit inv = c.inverse();
    for (long i = 0; i < k; ++i) {
      out.append(inv);
      out.append(c);
    }
    return out;
  }
  const long L = static_cast<long>(c.gates.size());
  long m = static_cast<long>(std::ceil((scale - 1.0) / 2.0 * double(L)));
  m = std::min(m, L);
  Circuit tail(c.width);
  for (long i = L - m; i < L; ++i) tail.gates.push_back(c.gates[static_cast<std::size_t>(i)]);
  out.append(tail.inverse());
  out.append(tail);
  return out;
}

// Least-squares linear fit evaluated at scale zero.
inline double extrapolate(const ZneSchedule& schedule, const std::vector<double>& values) {
  schedule.validate();
  if (values.size() != schedule.scale_factors.size())
    throw std::invalid_argument("extrapolate: one value per scale factor required");
  const std::size_t n = values.size();
  if (n == 1) return values[0];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += schedule.scale_factors[i];
    sy += values[i];
    sxx += schedule.scale_factors[i] * schedule.scale_factors[i];
    sxy += schedule.scale_factors[i] * values[i];
  }
  double denom = double(n) * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw std::invalid_argument("extrapolate: degenerate schedule");
  double slope = (double(n) * sxy - sx * sy) / denom;
  return (sy - slope * sx) / double(n);
}

}  // namespace symtrot
