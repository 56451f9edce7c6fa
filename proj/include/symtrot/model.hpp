#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "symtrot/numerics.hpp"
#include "symtrot/circuit.hpp"

namespace symtrot {

enum class Axis { X, Y, Z };

inline char axis_char(Axis a) { return a == Axis::X ? 'X' : a == Axis::Y ? 'Y' : 'Z'; }
inline const CMatrix& axis_matrix(Axis a) {
  static const CMatrix mx = pauli_x(), my = pauli_y(), mz = pauli_z();
  return a == Axis::X ? mx : a == Axis::Y ? my : mz;
}

// One weighted Pauli string; `letters` maps 1-based site index to an axis,
// identity on every site not listed.
struct PauliTerm {
  double coeff = 1.0;
  std::map<int, Axis> letters;

  std::string key() const {
    std::ostringstream os;
    for (const auto& [site, ax] : letters) os << axis_char(ax) << site << ' ';
    return os.str();
  }
};

struct PauliSum {
  int width = 0;
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(int w) : width(w) {}

  PauliSum& add(double coeff, std::map<int, Axis> letters) {
    for (const auto& [site, ax] : letters) {
      (void)ax;
      if (site < 1 || site > width)
        throw std::invalid_argument("pauli term site out of range");
    }
    terms.push_back({coeff, std::move(letters)});
    return *this;
  }

  // Site i (1-based) occupies bit i-1 of the index, so the Kronecker chain
  // runs from site `width` down to site 1.
  CMatrix to_matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << width;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (const auto& t : terms) {
      CMatrix m = CMatrix::Identity(1, 1);
      for (int s = width; s >= 1; --s) {
        auto it = t.letters.find(s);
        m = kron(m, it == t.letters.end() ? pauli_i() : axis_matrix(it->second));
      }
      out += t.coeff * m;
    }
    return out;
  }

  // sort by (support, letters), merge like terms, drop |c| < 1e-14
  PauliSum canonicalized() const {
    std::map<std::string, double> acc;
    for (const auto& t : terms) acc[t.key()] += t.coeff;
    PauliSum out(width);
    for (const auto& [key, c] : acc) {
      if (std::abs(c) < 1e-14) continue;
      PauliTerm t;
      t.coeff = c;
      std::istringstream is(key);
      std::string tok;
      while (is >> tok) {
        Axis ax = tok[0] == 'X' ? Axis::X : tok[0] == 'Y' ? Axis::Y : Axis::Z;
        t.letters[std::stoi(tok.substr(1))] = ax;
      }
      out.terms.push_back(std::move(t));
    }
    return out;
  }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& t : terms) {
      os << format_double(t.coeff);
      for (const auto& [site, ax] : t.letters) os << ' ' << axis_char(ax) << site;
      os << '\n';
    }
    return os.str();
  }

  static PauliSum from_text(const std::string& text, int width) {
    PauliSum out(width);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::istringstream ls(line);
      double c;
      if (!(ls >> c)) continue;
      PauliTerm t;
      t.coeff = c;
      std::string tok;
      while (ls >> tok) {
        Axis ax = tok[0] == 'X' ? Axis::X : tok[0] == 'Y' ? Axis::Y : Axis::Z;
        t.letters[std::stoi(tok.substr(1))] = ax;
      }
      out.terms.push_back(std::move(t));
    }
    return out;
  }
};

// J=1 XXX open chain: sum over adjacent pairs of XX + YY + ZZ.
inline PauliSum build_heisenberg(int n_sites) {
  if (n_sites < 2)
    throw std::invalid_argument("build_heisenberg: need at least 2 sites");
  PauliSum h(n_sites);
  for (int i = 1; i < n_sites; ++i)
    for (Axis a : {Axis::X, Axis::Y, Axis::Z})
      h.add(1.0, {{i, a}, {i + 1, a}});
  return h;
}

// --- encoding operators -------------------------------------------------

struct EncodingOperator {
  int width = 0;
  CMatrix matrix;
  std::vector<std::size_t> basis_map;  // basis_map[x] = image index of |x>
};

// The 3-site encoder, defined by its basis permutation table.  Site-major
// labels: 000->000, 011->001, 110->010, 101->011, 111->100, 100->101,
// 001->110, 010->111.
inline EncodingOperator build_encoder_3() {
  static const std::vector<std::pair<const char*, const char*>> table = {
      {"000", "000"}, {"011", "001"}, {"110", "010"}, {"101", "011"},
      {"111", "100"}, {"100", "101"}, {"001", "110"}, {"010", "111"}};
  EncodingOperator enc;
  enc.width = 3;
  enc.matrix = CMatrix::Zero(8, 8);
  enc.basis_map.assign(8, 0);
  for (const auto& [src, dst] : table) {
    enc.basis_map[basis_index(src)] = basis_index(dst);
    enc.matrix(basis_index(dst), basis_index(src)) = 1.0;
  }
  return enc;
}

// sigma_x1 + sigma_x2 + sigma_z1 + sigma_z2 - sigma_z1 sigma_x2 - sigma_x1 sigma_z2
inline PauliSum effective_hamiltonian_3() {
  PauliSum h(2);
  h.add(1, {{1, Axis::X}});
  h.add(1, {{2, Axis::X}});
  h.add(1, {{1, Axis::Z}});
  h.add(1, {{2, Axis::Z}});
  h.add(-1, {{1, Axis::Z}, {2, Axis::X}});
  h.add(-1, {{1, Axis::X}, {2, Axis::Z}});
  return h;
}

// --- periodicity ----------------------------------------------------------

struct PeriodicityReport {
  bool is_periodic = false;
  double period = 0.0;
  cxd phase = 1.0;
};

// Periodic with period pi iff every eigenvalue gap is an even integer; the
// propagator at t = pi is then phase * I.
inline PeriodicityReport check_periodicity(const PauliSum& h, double tol = 1e-9) {
  CMatrix m = h.to_matrix();
  Spectrum s = eig_hermitian(m);
  PeriodicityReport r;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    for (Eigen::Index j = i + 1; j < s.eigenvalues.size(); ++j) {
      double gap = s.eigenvalues[j] - s.eigenvalues[i];
      double nearest_even = 2.0 * std::round(gap / 2.0);
      if (std::abs(gap - nearest_even) > tol) return r;
    }
  r.is_periodic = true;
  r.period = kPi;
  r.phase = std::exp(cxd(0, -s.eigenvalues[0] * kPi));
  return r;
}

// --- generalized (odd-N) encoder and effective Hamiltonian -----------------

namespace detail {
inline CMatrix site_op(const CMatrix& m, int site, int width) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int s = width; s >= 1; --s)
    out = kron(out, s == site ? m : pauli_i());
  return out;
}
}  // namespace detail

// Encoder with the parity projector structure: a half-projector on the
// center site per parity sector with an X layer on the non-center sites of
// the block.  `sites` lists the block (odd length); parity is taken over the
// block only, so the same formula serves the whole chain and local blocks.
inline EncodingOperator build_encoder_block(const std::vector<int>& sites, int width) {
  if (sites.size() % 2 == 0 || sites.size() < 3)
    throw std::invalid_argument("encoder block needs an odd number of sites >= 3");
  const int center = sites[sites.size() / 2];
  const Eigen::Index dim = Eigen::Index{1} << width;

  CMatrix zprod = CMatrix::Identity(dim, dim);
  for (int s : sites) zprod = zprod * detail::site_op(pauli_z(), s, width);
  CMatrix p_even = (CMatrix::Identity(dim, dim) + zprod) / 2.0;
  CMatrix p_odd = (CMatrix::Identity(dim, dim) - zprod) / 2.0;

  CMatrix xbar = CMatrix::Identity(dim, dim);
  for (int s : sites)
    if (s != center) xbar = xbar * detail::site_op(pauli_x(), s, width);

  CMatrix a_plus(2, 2), a_minus(2, 2);
  a_plus << 1, 1, 0, 0;   // (I + Z + X + iY)/2
  a_minus << 0, 0, 1, 1;  // (I - Z + X - iY)/2

  CMatrix u = xbar * detail::site_op(a_minus, center, width) * p_odd +
              detail::site_op(a_plus, center, width) * p_even;

  EncodingOperator enc;
  enc.width = width;
  enc.matrix = u;
  enc.basis_map.assign(dim, 0);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row;
    u.col(col).cwiseAbs().maxCoeff(&row);
    enc.basis_map[col] = static_cast<std::size_t>(row);
  }
  return enc;
}

inline EncodingOperator build_encoder_general(int n_sites) {
  if (n_sites % 2 == 0 || n_sites < 3)
    throw std::invalid_argument("build_encoder_general: n_sites must be odd and >= 3");
  std::vector<int> sites(n_sites);
  for (int i = 0; i < n_sites; ++i) sites[i] = i + 1;
  return build_encoder_block(sites, n_sites);
}

// Effective Hamiltonian for the odd-N chain under the generalized encoder:
// untouched pair terms away from the center, single X terms at k and k+2,
// and the Z-string-dressed block term (empty first sum and trivial string
// at N=3).  N = 2k+1.
inline PauliSum effective_hamiltonian_general(int n_sites) {
  if (n_sites % 2 == 0 || n_sites < 3)
    throw std::invalid_argument("effective_hamiltonian_general: n_sites must be odd and >= 3");
  const int k = (n_sites - 1) / 2;
  PauliSum h(n_sites);
  for (int m = 1; m < n_sites; ++m) {
    if (m == k || m == k + 1) continue;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) h.add(1.0, {{m, a}, {m + 1, a}});
  }
  h.add(1, {{k, Axis::X}});
  h.add(1, {{k + 2, Axis::X}});
  std::map<int, Axis> zstring;
  for (int m = 1; m <= n_sites; ++m)
    if (m != k && m != k + 1 && m != k + 2) zstring[m] = Axis::Z;
  auto dressed = [&](double c, std::map<int, Axis> core) {
    for (const auto& [s, a] : zstring) core[s] = a;
    h.add(c, std::move(core));
  };
  dressed(1, {{k, Axis::Z}});
  dressed(1, {{k + 2, Axis::Z}});
  dressed(-1, {{k, Axis::X}, {k + 2, Axis::Z}});
  dressed(-1, {{k, Axis::Z}, {k + 2, Axis::X}});
  return h;
}

// Local block quantities for the partial transformation: block m covers
// sites (2m-1, 2m, 2m+1).
inline std::vector<int> block_sites(int m) { return {2 * m - 1, 2 * m, 2 * m + 1}; }

inline EncodingOperator build_encoder_local(int m, int width) {
  return build_encoder_block(block_sites(m), width);
}

// H_eff^m: the two-body form on sites (2m-1, 2m+1), center site untouched.
inline PauliSum effective_block_hamiltonian(int m, int width) {
  const int a = 2 * m - 1, b = 2 * m + 1;
  if (b > width) throw std::invalid_argument("effective_block_hamiltonian: block exceeds chain");
  PauliSum h(width);
  h.add(1, {{a, Axis::X}});
  h.add(1, {{b, Axis::X}});
  h.add(1, {{a, Axis::Z}});
  h.add(1, {{b, Axis::Z}});
  h.add(-1, {{a, Axis::Z}, {b, Axis::X}});
  h.add(-1, {{a, Axis::X}, {b, Axis::Z}});
  return h;
}

namespace detail {
// Exact Pauli-basis decomposition of a (small) matrix; coefficients below
// 1e-12 are dropped.  Used to express conjugated blocks symbolically.
inline PauliSum pauli_decompose(const CMatrix& m, int width) {
  PauliSum out(width);
  const int n_strings = 1;
  (void)n_strings;
  std::vector<int> digits(width, 0);
  const Eigen::Index dim = Eigen::Index{1} << width;
  const double scale = 1.0 / double(dim);
  bool done = false;
  while (!done) {
    CMatrix p = CMatrix::Identity(1, 1);
    std::map<int, Axis> letters;
    for (int s = width; s >= 1; --s) {
      int d = digits[s - 1];
      static const Axis ax[3] = {Axis::X, Axis::Y, Axis::Z};
      p = kron(p, d == 0 ? pauli_i() : axis_matrix(ax[d - 1]));
      if (d != 0) letters[s] = ax[d - 1];
    }
    cxd c = (p.adjoint() * m).trace() * scale;
    if (std::abs(c.imag()) > 1e-9)
      throw std::runtime_error("pauli_decompose: non-Hermitian input");
    if (std::abs(c.real()) > 1e-12) {
      PauliTerm t;
      t.coeff = c.real();
      t.letters = letters;
      out.terms.push_back(std::move(t));
    }
    int i = 0;
    for (; i < width; ++i) {
      if (++digits[i] < 4) break;
      digits[i] = 0;
    }
    done = (i == width);
  }
  return out;
}
}  // namespace detail

// Mixed-representation Hamiltonian: blocks listed in `x_set` keep their raw
// pair terms; the remaining blocks are carried as their encoder-conjugated
// form U+(m) Heff^m U(m), expanded back into Pauli terms.  The total matrix
// therefore always equals the chain Hamiltonian; what changes is the term
// grouping the Trotter builder works from.
inline PauliSum partial_transform(int n_sites, const std::set<int>& x_set) {
  if (n_sites % 2 == 0 || n_sites < 3)
    throw std::invalid_argument("partial_transform: n_sites must be odd and >= 3");
  const int k = (n_sites - 1) / 2;
  for (int m : x_set)
    if (m < 1 || m > k) throw std::invalid_argument("partial_transform: block index out of range");
  PauliSum out(n_sites);
  for (int m = 1; m <= k; ++m) {
    if (x_set.count(m)) {
      for (int pair : {2 * m - 1, 2 * m})
        for (Axis a : {Axis::X, Axis::Y, Axis::Z})
          out.add(1.0, {{pair, a}, {pair + 1, a}});
    } else {
      EncodingOperator enc = build_encoder_local(m, n_sites);
      CMatrix heff = effective_block_hamiltonian(m, n_sites).to_matrix();
      CMatrix conj = enc.matrix.adjoint() * heff * enc.matrix;
      PauliSum block = detail::pauli_decompose(conj, n_sites);
      for (auto& t : block.terms) out.terms.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace symtrot
