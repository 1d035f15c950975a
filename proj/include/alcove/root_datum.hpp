#pragma once

// Semisimple root data in coweight-lattice coordinates.
//
// A datum is a product of irreducible types with a lattice between the coroot
// lattice and the full coweight lattice.  All vectors are stored in the basis
// of the chosen lattice, so lattice membership is an integrality test.  Roots
// are covectors (row vectors), coroots are vectors (columns).  The invariant
// form is normalized so short coroots of every factor have squared length 2.

#include "alcove/numeric.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace alcove {

struct RootEntry {
  QVec covector;       // coords of the root as functional on the lattice basis
  QVec coroot;         // coords of the coroot in the lattice basis
  QVec simple_coeffs;  // expansion of the root over simple roots
  std::size_t factor;  // irreducible factor index
};

struct RootDatum {
  std::string label;
  std::size_t rank = 0;
  std::vector<std::size_t> factor_rank;    // per irreducible factor
  std::vector<std::size_t> factor_offset;  // first simple index of the factor
  std::vector<std::string> factor_type;    // e.g. "A1", "C2"

  QMat cartan;         // cartan.at(i,j) = <alpha_i, alpha_j^vee>
  QMat simple_roots;   // row i = alpha_i as covector on the lattice basis
  QMat simple_coroots; // column j = alpha_j^vee in the lattice basis
  QMat lattice_basis;  // columns = lattice basis in fundamental-coweight coords
  QMat invariant_form; // on lattice coords; W-invariant, positive definite
  QVec two_rho;        // covector: sum of positive roots

  std::vector<RootEntry> positive_roots;
  std::vector<QVec> highest_root;    // per factor, covector
  std::vector<QVec> highest_coroot;  // per factor, vector
  std::vector<QMat> simple_reflections;  // action on lattice coords
  std::vector<std::string> simple_names;

  mutable std::vector<QMat> w_mats;               // all of W, BFS order, lazily built
  mutable std::vector<std::vector<int>> w_words;  // reduced word per element

  Rat pairing(const QVec& covector, const QVec& v) const {
    Rat s(0);
    for (std::size_t i = 0; i < rank; ++i) s += covector[i] * v[i];
    return s;
  }

  Rat form(const QVec& x, const QVec& y) const {
    Rat s(0);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (invariant_form.at(i, j) != 0) s += x[i] * invariant_form.at(i, j) * y[j];
    return s;
  }

  Rat pair_two_rho(const QVec& v) const { return pairing(two_rho, v); }

  QVec apply_simple(std::size_t i, const QVec& v) const {
    Rat c = pairing(row(simple_roots, i), v);
    QVec r = v;
    if (c != 0)
      for (std::size_t k = 0; k < rank; ++k) r[k] -= c * simple_coroots.at(k, i);
    return r;
  }

  static QVec row(const QMat& m, std::size_t i) {
    QVec r(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) r[j] = m.at(i, j);
    return r;
  }

  static QVec col(const QMat& m, std::size_t j) {
    QVec r(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) r[i] = m.at(i, j);
    return r;
  }

  // Dominant representative of the W-orbit; optionally the word applied
  // (letters in application order: v_dom = s_{w_k} ... s_{w_1} v).
  QVec dominant_representative(QVec v, std::vector<int>* word_out = nullptr) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t i = 0; i < rank; ++i) {
        if (pairing(row(simple_roots, i), v) < 0) {
          v = apply_simple(i, v);
          if (word_out) word_out->push_back(static_cast<int>(i));
          moved = true;
        }
      }
    }
    return v;
  }

  bool is_dominant(const QVec& v) const {
    for (std::size_t i = 0; i < rank; ++i)
      if (pairing(row(simple_roots, i), v) < 0) return false;
    return true;
  }

  // Full Weyl group as matrices on the lattice, BFS over right multiplication;
  // index 0 is the identity and words are reduced.
  const std::vector<QMat>& weyl_elements() const {
    if (!w_mats.empty()) return w_mats;
    std::map<std::vector<Rat>, std::size_t> seen;
    w_mats.push_back(QMat::identity(rank));
    w_words.push_back({});
    seen[w_mats[0].a] = 0;
    for (std::size_t head = 0; head < w_mats.size(); ++head) {
      QMat cur = w_mats[head];  // copy: w_mats may reallocate
      std::vector<int> word = w_words[head];
      for (std::size_t i = 0; i < rank; ++i) {
        QMat nxt = cur * simple_reflections[i];
        if (seen.emplace(nxt.a, w_mats.size()).second) {
          w_mats.push_back(nxt);
          word.push_back(static_cast<int>(i));
          w_words.push_back(word);
          word.pop_back();
        }
      }
      if (w_mats.size() > 2000000) throw std::runtime_error("Weyl group too large");
    }
    return w_mats;
  }

  std::size_t weyl_order() const { return weyl_elements().size(); }
};

namespace detail {

inline QMat cartan_matrix(const std::string& type, std::size_t n) {
  auto C = QMat(n, n);
  for (std::size_t i = 0; i < n; ++i) C.at(i, i) = 2;
  auto link = [&](std::size_t i, std::size_t j, long long cij, long long cji) {
    C.at(i, j) = cij;
    C.at(j, i) = cji;
  };
  char t = type[0];
  switch (t) {
    case 'A':
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1, -1, -1);
      break;
    case 'B':  // alpha_n short
      if (n < 2) throw std::invalid_argument("B rank >= 2");
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
      link(n - 2, n - 1, -2, -1);
      break;
    case 'C':  // alpha_n long
      if (n < 2) throw std::invalid_argument("C rank >= 2");
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
      link(n - 2, n - 1, -1, -2);
      break;
    case 'D':
      if (n < 3) throw std::invalid_argument("D rank >= 3");
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
      link(n - 3, n - 1, -1, -1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw std::invalid_argument("E rank 6..8");
      // Bourbaki numbering: node 2 hangs off node 4.
      link(0, 2, -1, -1);
      link(1, 3, -1, -1);
      link(2, 3, -1, -1);
      for (std::size_t i = 3; i + 1 < n; ++i) link(i, i + 1, -1, -1);
      break;
    case 'F':
      if (n != 4) throw std::invalid_argument("F rank 4");
      link(0, 1, -1, -1);
      link(1, 2, -2, -1);  // alpha_3, alpha_4 short
      link(2, 3, -1, -1);
      break;
    case 'G':
      if (n != 2) throw std::invalid_argument("G rank 2");
      link(0, 1, -1, -3);  // alpha_1 short, alpha_2 long
      break;
    default:
      throw std::invalid_argument("unknown type " + type);
  }
  return C;
}

// Symmetrizer scale c_i per node: B(alpha_i^vee, alpha_j^vee) = c_i C[i][j],
// normalized per factor so min c_i = 1 (short coroots get squared length 2).
inline std::vector<Rat> symmetrizer(const QMat& C) {
  std::size_t n = C.rows;
  std::vector<Rat> c(n, Rat(0));
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (c[seed] != 0) continue;
    c[seed] = 1;
    std::vector<std::size_t> stack{seed};
    std::vector<std::size_t> comp{seed};
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || C.at(i, j) == 0 || c[j] != 0) continue;
        c[j] = c[i] * C.at(i, j) / C.at(j, i);
        stack.push_back(j);
        comp.push_back(j);
      }
    }
    Rat mn = c[comp[0]];
    for (auto k : comp) mn = std::min(mn, c[k]);
    for (auto k : comp) c[k] /= mn;
  }
  return c;
}

}  // namespace detail

// Core builder.  `lattice_basis` columns are in fundamental-coweight
// coordinates and must span a lattice between the coroot lattice and the
// coweight lattice.
inline RootDatum build_root_datum_with_lattice(
    const std::vector<std::pair<std::string, std::size_t>>& factors,
    QMat lattice_basis, std::string label) {
  RootDatum d;
  d.label = std::move(label);
  for (auto& [t, n] : factors) {
    d.factor_offset.push_back(d.rank);
    d.factor_rank.push_back(n);
    d.factor_type.push_back(t + std::to_string(n));
    d.rank += n;
  }
  std::size_t r = d.rank;
  d.cartan = QMat(r, r);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    QMat Cf = detail::cartan_matrix(factors[f].first, factors[f].second);
    std::size_t off = d.factor_offset[f];
    for (std::size_t i = 0; i < Cf.rows; ++i)
      for (std::size_t j = 0; j < Cf.cols; ++j) d.cartan.at(off + i, off + j) = Cf.at(i, j);
  }

  if (lattice_basis.rows != r || lattice_basis.cols != r)
    throw std::invalid_argument("lattice basis must be rank x rank");
  d.lattice_basis = lattice_basis;
  auto inv = inverse(lattice_basis);
  if (!inv) throw std::invalid_argument("lattice basis is singular");

  // alpha_i as covector on the lattice basis: row i of B (since
  // <alpha_i, pi_j^vee> = delta_ij); alpha_j^vee = B^{-1} (column j of C).
  d.simple_roots = lattice_basis;
  d.simple_coroots = (*inv) * d.cartan;
  for (auto& v : d.simple_roots.a)
    if (boost::multiprecision::denominator(v) != 1)
      throw std::invalid_argument("lattice not contained in coweight lattice");
  for (auto& v : d.simple_coroots.a)
    if (boost::multiprecision::denominator(v) != 1)
      throw std::invalid_argument("lattice does not contain coroot lattice");

  // Invariant form: G[i][j] = c_i C[i][j] on coroot coordinates, pushed to
  // lattice coordinates via the coroot matrix.
  auto c = detail::symmetrizer(d.cartan);
  QMat G(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) G.at(i, j) = c[i] * d.cartan.at(i, j);
  QMat Minv = *inverse(d.simple_coroots);
  d.invariant_form = transpose(Minv) * G * Minv;

  // Simple reflections on lattice coordinates.
  for (std::size_t i = 0; i < r; ++i) {
    QMat s = QMat::identity(r);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < r; ++l)
        s.at(k, l) -= d.simple_coroots.at(k, i) * d.simple_roots.at(i, l);
    d.simple_reflections.push_back(s);
  }

  // Positive roots by reflection closure of the simple pairs.
  std::map<std::vector<Rat>, bool> seen;
  std::vector<RootEntry> all;
  for (std::size_t i = 0; i < r; ++i) {
    RootEntry e;
    e.covector = RootDatum::row(d.simple_roots, i);
    e.coroot = RootDatum::col(d.simple_coroots, i);
    e.simple_coeffs = qvec_zero(r);
    e.simple_coeffs[i] = 1;
    std::size_t f = 0;
    while (f + 1 < d.factor_offset.size() && d.factor_offset[f + 1] <= i) ++f;
    e.factor = f;
    all.push_back(e);
    seen[e.covector] = true;
  }
  for (std::size_t head = 0; head < all.size(); ++head) {
    RootEntry cur = all[head];
    for (std::size_t j = 0; j < r; ++j) {
      Rat pair_with_coroot_j = d.pairing(cur.covector, RootDatum::col(d.simple_coroots, j));
      RootEntry nxt;
      nxt.covector = cur.covector;
      nxt.simple_coeffs = cur.simple_coeffs;
      for (std::size_t k = 0; k < r; ++k) {
        nxt.covector[k] -= pair_with_coroot_j * d.simple_roots.at(j, k);
        nxt.simple_coeffs[k] -= pair_with_coroot_j * (k == j ? Rat(1) : Rat(0));
      }
      Rat alpha_j_of_coroot = d.pairing(RootDatum::row(d.simple_roots, j), cur.coroot);
      nxt.coroot = cur.coroot;
      for (std::size_t k = 0; k < r; ++k)
        nxt.coroot[k] -= alpha_j_of_coroot * d.simple_coroots.at(k, j);
      nxt.factor = cur.factor;
      if (seen.emplace(nxt.covector, true).second) all.push_back(nxt);
    }
  }
  d.two_rho = qvec_zero(r);
  for (auto& e : all) {
    bool pos = true;
    for (auto& x : e.simple_coeffs)
      if (x < 0) pos = false;
    if (!pos) continue;
    d.positive_roots.push_back(e);
    d.two_rho = d.two_rho + e.covector;
  }

  // Highest root per factor: maximal coefficient sum.
  d.highest_root.assign(factors.size(), {});
  d.highest_coroot.assign(factors.size(), {});
  std::vector<Rat> best(factors.size(), Rat(-1));
  for (auto& e : d.positive_roots) {
    Rat s(0);
    for (auto& x : e.simple_coeffs) s += x;
    if (s > best[e.factor]) {
      best[e.factor] = s;
      d.highest_root[e.factor] = e.covector;
      d.highest_coroot[e.factor] = e.coroot;
    }
  }

  for (std::size_t f = 0; f < factors.size(); ++f)
    for (std::size_t i = 0; i < d.factor_rank[f]; ++i)
      d.simple_names.push_back(factors.size() == 1
                                   ? "s" + std::to_string(i + 1)
                                   : "s" + std::to_string(f) + "." + std::to_string(i + 1));
  return d;
}

// Spec strings: "A1:sc", "C2:sc", "G2", "A2:ad", "A1xA1:sc".  Default isogeny
// is simply connected.
inline RootDatum build_root_datum(const std::string& spec) {
  std::string types = spec, iso = "sc";
  if (auto p = spec.find(':'); p != std::string::npos) {
    types = spec.substr(0, p);
    iso = spec.substr(p + 1);
  }
  if (iso != "sc" && iso != "ad") throw std::invalid_argument("isogeny must be sc or ad");
  std::vector<std::pair<std::string, std::size_t>> factors;
  std::size_t pos = 0;
  while (pos < types.size()) {
    char t = types[pos];
    if (t < 'A' || t > 'G') throw std::invalid_argument("bad type letter in " + spec);
    std::size_t q = pos + 1, n = 0;
    while (q < types.size() && isdigit(types[q])) n = 10 * n + (types[q++] - '0');
    if (n == 0) throw std::invalid_argument("bad rank in " + spec);
    factors.push_back({std::string(1, t), n});
    if (q < types.size()) {
      if (types[q] != 'x') throw std::invalid_argument("factors join with 'x': " + spec);
      ++q;
    }
    pos = q;
  }
  std::size_t r = 0;
  for (auto& [t, n] : factors) r += n;
  QMat basis = QMat::identity(r);
  if (iso == "sc") {
    // Basis = simple coroots, i.e. the columns of the Cartan matrix.
    std::size_t off = 0;
    basis = QMat(r, r);
    for (auto& [t, n] : factors) {
      QMat C = detail::cartan_matrix(t, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis.at(off + i, off + j) = C.at(i, j);
      off += n;
    }
  }
  return build_root_datum_with_lattice(factors, basis, spec);
}

}  // namespace alcove
