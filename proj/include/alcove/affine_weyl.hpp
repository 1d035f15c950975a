#pragma once

// Extended affine Weyl group W~ = lattice x W acting on the apartment.
//
// Elements are stored as t_lambda * w with lambda integral in lattice
// coordinates.  The affine simple system I^a has nodes 0..rank-1 for the
// finite simples and one extra node per irreducible factor for its affine
// reflection.  Lengths use the Iwahori-Matsumoto formula; a BFS oracle in the
// test suite cross-checks it.

#include "alcove/root_datum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace alcove {

struct AffElt {
  QVec lam;  // integral
  QMat w;

  bool operator==(const AffElt& o) const { return lam == o.lam && w == o.w; }
  bool operator<(const AffElt& o) const {
    if (lam != o.lam) return lam < o.lam;
    return w.a < o.w.a;
  }
};

// Affine-linear functional x -> <cov, x> + c.
struct AffRoot {
  QVec cov;
  Rat c;
  bool operator==(const AffRoot& o) const { return cov == o.cov && c == o.c; }
};

struct OmegaInfo {
  AffElt rep;                 // the length-0 representative
  std::vector<int> node_perm; // induced permutation of I^a nodes
};

class Aff {
 public:
  RootDatum datum;
  std::size_t nodes = 0;  // |I^a| = rank + number of factors

  std::vector<AffRoot> node_root;   // simple affine roots
  std::vector<AffElt> node_refl;    // simple affine reflections
  std::vector<std::string> node_name;

  explicit Aff(RootDatum d) : datum(std::move(d)) {
    std::size_t r = datum.rank;
    nodes = r + datum.factor_rank.size();
    for (std::size_t i = 0; i < r; ++i) {
      node_root.push_back({RootDatum::row(datum.simple_roots, i), Rat(0)});
      node_refl.push_back({qvec_zero(r), datum.simple_reflections[i]});
      node_name.push_back(datum.simple_names[i]);
    }
    for (std::size_t f = 0; f < datum.factor_rank.size(); ++f) {
      QVec mtheta = Rat(-1) * datum.highest_root[f];
      node_root.push_back({mtheta, Rat(1)});
      // s_0 = t_{theta^vee} s_theta
      QMat s = QMat::identity(r);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l)
          s.at(k, l) -= datum.highest_coroot[f][k] * datum.highest_root[f][l];
      node_refl.push_back({datum.highest_coroot[f], s});
      node_name.push_back(datum.factor_rank.size() == 1
                              ? "s0"
                              : "s" + std::to_string(f) + ".0");
    }
    for (auto& e : datum.positive_roots) root_sign_[e.covector] = true;
    for (auto& e : datum.positive_roots)
      root_sign_[Rat(-1) * e.covector] = false;
  }

  std::size_t rank() const { return datum.rank; }

  AffElt identity() const { return {qvec_zero(rank()), QMat::identity(rank())}; }

  AffElt translation(const QVec& lam) const {
    for (auto& x : lam)
      if (boost::multiprecision::denominator(x) != 1)
        throw std::invalid_argument("translation must be a lattice vector");
    return {lam, QMat::identity(rank())};
  }

  bool finite_root_positive(const QVec& cov) const {
    auto it = root_sign_.find(cov);
    if (it == root_sign_.end()) throw std::logic_error("not a root covector");
    return it->second;
  }

  // --- group operations -----------------------------------------------

  AffElt mul(const AffElt& a, const AffElt& b) const {
    return {a.lam + a.w * b.lam, a.w * b.w};
  }

  AffElt inv(const AffElt& a) const {
    QMat wi = *inverse(a.w);
    return {Rat(-1) * (wi * a.lam), wi};
  }

  QVec act_point(const AffElt& a, const QVec& x) const { return a.lam + a.w * x; }

  // Push-forward of an affine functional: (a . f)(x) = f(a^{-1} x).
  AffRoot act_affine_root(const AffElt& a, const AffRoot& f) const {
    QMat wi = *inverse(a.w);
    QVec cov(rank(), Rat(0));
    for (std::size_t k = 0; k < rank(); ++k)
      for (std::size_t j = 0; j < rank(); ++j) cov[k] += f.cov[j] * wi.at(j, k);
    Rat c = f.c;
    for (std::size_t k = 0; k < rank(); ++k) c -= cov[k] * a.lam[k];
    return {cov, c};
  }

  bool affine_root_negative(const AffRoot& f) const {
    if (f.c != 0) return f.c < 0;
    return !finite_root_positive(f.cov);
  }

  // --- length and descents ----------------------------------------------

  long long length(const AffElt& a) const {
    long long len = 0;
    for (auto& e : datum.positive_roots) {
      // w^{-1}(alpha) = alpha o w
      QVec back(rank(), Rat(0));
      for (std::size_t k = 0; k < rank(); ++k)
        for (std::size_t j = 0; j < rank(); ++j)
          back[k] += e.covector[j] * a.w.at(j, k);
      Rat pair = datum.pairing(e.covector, a.lam);
      Rat term = finite_root_positive(back) ? pair : pair - 1;
      if (term < 0) term = -term;
      len += static_cast<long long>(Int(boost::multiprecision::numerator(term)));
    }
    return len;
  }

  bool right_descent(const AffElt& a, std::size_t i) const {
    return affine_root_negative(act_affine_root(a, node_root[i]));
  }

  bool left_descent(const AffElt& a, std::size_t i) const {
    return affine_root_negative(act_affine_root(inv(a), node_root[i]));
  }

  // Reduced word s_{i1}...s_{ik} * omega-rep; letters are I^a node indices.
  std::pair<std::vector<int>, std::size_t> reduced_word(AffElt a) const {
    std::vector<int> letters;
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t i = 0; i < nodes; ++i) {
        if (left_descent(a, i)) {
          letters.push_back(static_cast<int>(i));
          a = mul(node_refl[i], a);
          moved = true;
          break;
        }
      }
    }
    // a now has length 0
    return {letters, omega_index_of(a)};
  }

  // --- Bruhat order -------------------------------------------------------

  // Standard one-sided recursion; elements in different W^a-cosets are
  // incomparable.
  bool bruhat_leq(AffElt a, AffElt b) const {
    if (kappa(a) != kappa(b)) return false;
    long long la = length(a), lb = length(b);
    while (true) {
      if (la > lb) return false;
      if (lb == 0) return a == b;
      std::size_t i = 0;
      while (i < nodes && !left_descent(b, i)) ++i;
      b = mul(node_refl[i], b);
      --lb;
      if (left_descent(a, i)) {
        a = mul(node_refl[i], a);
        --la;
      }
    }
  }

  // --- coset minimization ---------------------------------------------

  AffElt min_left_coset_rep(const std::vector<int>& J, AffElt w) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int j : J)
        if (left_descent(w, j)) {
          w = mul(node_refl[j], w);
          moved = true;
        }
    }
    return w;
  }

  AffElt min_right_coset_rep(AffElt w, const std::vector<int>& J) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int j : J)
        if (right_descent(w, j)) {
          w = mul(w, node_refl[j]);
          moved = true;
        }
    }
    return w;
  }

  // Minimal element of W_{left} w W_{right}; unique for finite-type subsets.
  AffElt min_double_coset_rep(const std::vector<int>& left,
                              const std::vector<int>& right, AffElt w) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int j : left)
        if (left_descent(w, j)) {
          w = mul(node_refl[j], w);
          moved = true;
        }
      for (int j : right)
        if (right_descent(w, j)) {
          w = mul(w, node_refl[j]);
          moved = true;
        }
    }
    return w;
  }

  bool is_min_left_rep(const std::vector<int>& J, const AffElt& w) const {
    for (int j : J)
      if (left_descent(w, j)) return false;
    return true;
  }

  // Finite parabolic W_J as affine elements.
  std::vector<AffElt> parabolic_elements(const std::vector<int>& J) const {
    std::vector<AffElt> out{identity()};
    std::map<AffElt, bool> seen{{out[0], true}};
    for (std::size_t head = 0; head < out.size(); ++head) {
      AffElt cur = out[head];
      for (int j : J) {
        AffElt nxt = mul(cur, node_refl[j]);
        if (seen.emplace(nxt, true).second) out.push_back(nxt);
      }
      if (out.size() > 100000) throw std::runtime_error("subset is not finite type");
    }
    return out;
  }

  // --- Omega = W~ / W^a ---------------------------------------------------

  const std::vector<OmegaInfo>& omega() const {
    build_omega();
    return omega_;
  }

  std::size_t omega_order() const { return omega().size(); }

  // Index of the length-0 element a (a must have length 0).
  std::size_t omega_index_of(const AffElt& a) const {
    build_omega();
    for (std::size_t i = 0; i < omega_.size(); ++i)
      if (omega_[i].rep == a) return i;
    throw std::logic_error("not a length-0 element");
  }

  std::size_t kappa(const AffElt& a) const {
    build_omega();
    auto it = residue_to_omega_.find(residue(a.lam));
    if (it == residue_to_omega_.end()) throw std::logic_error("kappa lookup failed");
    return it->second;
  }

  std::vector<int> omega_on_subset(std::size_t oi, const std::vector<int>& J) const {
    build_omega();
    std::vector<int> out;
    for (int j : J) out.push_back(omega_[oi].node_perm[j]);
    std::sort(out.begin(), out.end());
    return out;
  }

  // --- enumeration ---------------------------------------------------------

  // All elements of length <= L, sorted by (length, lam, matrix).
  std::vector<AffElt> enumerate_leq(long long L) const {
    std::vector<AffElt> all;
    std::map<AffElt, bool> seen;
    for (auto& oi : omega()) {
      all.push_back(oi.rep);
      seen.emplace(oi.rep, true);
    }
    for (std::size_t head = 0; head < all.size(); ++head) {
      AffElt cur = all[head];
      if (length(cur) >= L) continue;
      for (std::size_t i = 0; i < nodes; ++i) {
        AffElt nxt = mul(cur, node_refl[i]);
        if (seen.emplace(nxt, true).second) all.push_back(nxt);
      }
    }
    std::vector<AffElt> out;
    for (auto& a : all)
      if (length(a) <= L) out.push_back(a);
    std::sort(out.begin(), out.end(), [this](const AffElt& x, const AffElt& y) {
      long long lx = length(x), ly = length(y);
      if (lx != ly) return lx < ly;
      return x < y;
    });
    return out;
  }

  // All J with W_J finite: J misses at least one node of every factor.
  std::vector<std::vector<int>> finite_type_subsets() const {
    std::size_t nf = datum.factor_rank.size();
    std::vector<std::vector<int>> factor_nodes(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t i = 0; i < datum.factor_rank[f]; ++i)
        factor_nodes[f].push_back(static_cast<int>(datum.factor_offset[f] + i));
      factor_nodes[f].push_back(static_cast<int>(datum.rank + f));
    }
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << nodes); ++mask) {
      bool ok = true;
      for (std::size_t f = 0; f < nf && ok; ++f) {
        bool missing = false;
        for (int n : factor_nodes[f])
          if (!(mask >> n & 1)) missing = true;
        ok = missing;
      }
      if (!ok) continue;
      std::vector<int> J;
      for (std::size_t n = 0; n < nodes; ++n)
        if (mask >> n & 1) J.push_back(static_cast<int>(n));
      out.push_back(J);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    return out;
  }

  // --- rendering ------------------------------------------------------------

  // "t[2,-1]·s1 s2"; translations drop the word, finite elements drop the
  // t[..] prefix, the identity is "1".
  std::string render(const AffElt& a) const {
    std::string t;
    if (!is_zero(a.lam)) {
      t = "t[";
      for (std::size_t i = 0; i < rank(); ++i) {
        if (i) t += ",";
        t += to_string(a.lam[i]);
      }
      t += "]";
    }
    std::string word = finite_word(a.w);
    if (t.empty() && word.empty()) return "1";
    if (word.empty()) return t;
    if (t.empty()) return word;
    return t + "·" + word;
  }

  // Word form "s0 s1", "ω", "s0·ω"; used for piece and facet labels.  The
  // letters are the canonical reduced word, a length-zero tail is rendered as
  // "ω" (with its residue index appended when Ω is larger than {1, ω}).
  std::string render_word_form(const AffElt& a) const {
    auto [letters, oi] = reduced_word(a);
    std::string w = render_word(letters);
    if (oi != 0) {
      std::string om = omega_order() == 2 ? "ω" : "ω" + std::to_string(oi);
      w = w.empty() ? om : w + "·" + om;
    }
    return w.empty() ? "1" : w;
  }

  AffElt parse(const std::string& s) const {
    if (s == "1" || s.empty()) return identity();
    std::string rest = s;
    AffElt out = identity();
    if (rest.rfind("t[", 0) == 0) {
      auto close = rest.find(']');
      if (close == std::string::npos) throw std::invalid_argument("unclosed t[ in: " + s);
      std::string coords = rest.substr(2, close - 2);
      rest = rest.substr(close + 1);
      const std::string dot = "·";
      if (rest.rfind(dot, 0) == 0) rest = rest.substr(dot.size());
      QVec lam;
      std::size_t pos = 0;
      while (pos <= coords.size() && !coords.empty()) {
        auto comma = coords.find(',', pos);
        std::string piece = coords.substr(pos, comma == std::string::npos ? std::string::npos
                                                                          : comma - pos);
        lam.push_back(Rat(Int(piece)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (lam.size() != rank()) throw std::invalid_argument("bad coordinate count in: " + s);
      out = translation(lam);
    }
    std::size_t pos = 0;
    while (pos < rest.size()) {
      while (pos < rest.size() && rest[pos] == ' ') ++pos;
      if (pos >= rest.size()) break;
      auto sp = rest.find(' ', pos);
      std::string name = rest.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos);
      bool found = false;
      for (std::size_t i = 0; i < rank(); ++i) {
        if (datum.simple_names[i] == name) {
          out = mul(out, {qvec_zero(rank()), datum.simple_reflections[i]});
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("unknown reflection '" + name + "' in: " + s);
      pos = sp == std::string::npos ? rest.size() : sp + 1;
    }
    return out;
  }

  // Reduced words over affine nodes: "s0 s1 s0".
  std::string render_word(const std::vector<int>& letters) const {
    std::string s;
    for (int l : letters) {
      if (!s.empty()) s += " ";
      s += node_name[l];
    }
    return s;
  }

  std::string render_subset(const std::vector<int>& J) const {
    std::vector<std::string> names;
    for (int j : J) names.push_back(node_name[j]);
    std::sort(names.begin(), names.end());
    std::string s = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) s += ",";
      s += names[i];
    }
    return s + "}";
  }

  // --- alcove geometry -------------------------------------------------------

  // Vertex of the fundamental polysimplex for one chosen node per factor:
  // all other simple affine roots vanish there.
  QVec alcove_vertex(const std::vector<int>& choice) const {
    std::size_t r = rank();
    QMat A(r, r);
    QVec b(r, Rat(0));
    std::size_t row = 0;
    for (std::size_t n = 0; n < nodes; ++n) {
      if (std::find(choice.begin(), choice.end(), static_cast<int>(n)) != choice.end())
        continue;
      if (row >= r) throw std::logic_error("bad vertex choice");
      for (std::size_t k = 0; k < r; ++k) A.at(row, k) = node_root[n].cov[k];
      b[row] = -node_root[n].c;
      ++row;
    }
    auto x = solve(A, b);
    if (!x) throw std::logic_error("degenerate vertex system");
    return *x;
  }

  // Vertices of the closed standard facet F_J (one choice per factor avoiding J).
  std::vector<QVec> facet_vertices(const std::vector<int>& J) const {
    std::size_t nf = datum.factor_rank.size();
    std::vector<std::vector<int>> options(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t i = 0; i < datum.factor_rank[f]; ++i) {
        int n = static_cast<int>(datum.factor_offset[f] + i);
        if (std::find(J.begin(), J.end(), n) == J.end()) options[f].push_back(n);
      }
      int aff = static_cast<int>(datum.rank + f);
      if (std::find(J.begin(), J.end(), aff) == J.end()) options[f].push_back(aff);
      if (options[f].empty()) throw std::invalid_argument("J not finite type");
    }
    std::vector<QVec> verts;
    std::vector<std::size_t> idx(nf, 0);
    while (true) {
      std::vector<int> choice;
      for (std::size_t f = 0; f < nf; ++f) choice.push_back(options[f][idx[f]]);
      verts.push_back(alcove_vertex(choice));
      std::size_t f = 0;
      while (f < nf && ++idx[f] == options[f].size()) idx[f++] = 0;
      if (f == nf) break;
    }
    return verts;
  }

  QVec facet_barycenter(const std::vector<int>& J) const {
    auto verts = facet_vertices(J);
    QVec b = qvec_zero(rank());
    for (auto& v : verts) b = b + v;
    return Rat(1, static_cast<long long>(verts.size())) * b;
  }

  // Interior samples of the open facet F_J: random positive vertex weights.
  std::vector<QVec> facet_samples(const std::vector<int>& J, std::size_t count,
                                  Rng& rng) const {
    auto verts = facet_vertices(J);
    std::vector<QVec> out;
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<long long> wts;
      long long total = 0;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        wts.push_back(rng.in_range(1, 101));
        total += wts.back();
      }
      QVec p = qvec_zero(rank());
      for (std::size_t i = 0; i < verts.size(); ++i)
        p = p + Rat(wts[i], total) * verts[i];
      out.push_back(p);
    }
    return out;
  }

  // Walks x into the closed fundamental alcove: returns y in W^a with
  // y(x) inside, the final point, and its vanishing set J.
  struct AlcoveWalk {
    AffElt y;
    QVec point;
    std::vector<int> J;
  };

  AlcoveWalk walk_to_fundamental(QVec x) const {
    AffElt y = identity();
    for (long long guard = 0;; ++guard) {
      if (guard > 200000) throw std::runtime_error("alcove walk did not terminate");
      bool moved = false;
      for (std::size_t n = 0; n < nodes; ++n) {
        Rat v = node_root[n].c + datum.pairing(node_root[n].cov, x);
        if (v < 0) {
          x = act_point(node_refl[n], x);
          y = mul(node_refl[n], y);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    std::vector<int> J;
    for (std::size_t n = 0; n < nodes; ++n) {
      Rat v = node_root[n].c + datum.pairing(node_root[n].cov, x);
      if (v == 0) J.push_back(static_cast<int>(n));
    }
    return {y, x, J};
  }

 private:
  mutable std::map<QVec, bool> root_sign_;
  mutable std::vector<OmegaInfo> omega_;
  mutable std::map<QVec, std::size_t> residue_to_omega_;
  mutable QMat hnf_;  // column HNF of the coroot matrix

  // Column Hermite form: unimodular column ops make the matrix lower
  // triangular with positive diagonal.
  static QMat column_hnf(QMat m) {
    std::size_t n = m.rows;
    for (std::size_t i = 0; i < n; ++i) {
      // clear row i to the right of column i by gcd steps
      for (std::size_t j = i + 1; j < n; ++j) {
        while (m.at(i, j) != 0) {
          if (m.at(i, i) == 0) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m.at(k, i), m.at(k, j));
            continue;
          }
          Rat q = m.at(i, j) / m.at(i, i);
          Int qi = Int(boost::multiprecision::numerator(q)) /
                   Int(boost::multiprecision::denominator(q));
          // floor division
          if (q < 0 && Rat(qi) != q) qi -= 1;
          for (std::size_t k = 0; k < n; ++k) m.at(k, j) -= Rat(qi) * m.at(k, i);
          if (m.at(i, j) != 0)
            for (std::size_t k = 0; k < n; ++k) std::swap(m.at(k, i), m.at(k, j));
        }
      }
      if (m.at(i, i) < 0)
        for (std::size_t k = 0; k < n; ++k) m.at(k, i) = -m.at(k, i);
    }
    return m;
  }

  // Canonical residue of lam modulo the coroot lattice.
  QVec residue(QVec lam) const {
    for (std::size_t i = 0; i < rank(); ++i) {
      if (hnf_.at(i, i) == 0) continue;
      Rat q = lam[i] / hnf_.at(i, i);
      Int qi = Int(boost::multiprecision::numerator(q)) /
               Int(boost::multiprecision::denominator(q));
      if (q < 0 && Rat(qi) != q) qi -= 1;
      for (std::size_t k = 0; k < rank(); ++k) lam[k] -= Rat(qi) * hnf_.at(k, i);
    }
    return lam;
  }

  void build_omega() const {
    if (!omega_.empty()) return;
    hnf_ = column_hnf(datum.simple_coroots);
    Rat det = determinant(datum.simple_coroots);
    if (det < 0) det = -det;
    std::size_t expect = static_cast<std::size_t>(
        Int(boost::multiprecision::numerator(det)));
    // identity first
    omega_.push_back({identity(), {}});
    residue_to_omega_[residue(qvec_zero(rank()))] = 0;
    for (long long bound = 2; omega_.size() < expect; bound += 2) {
      if (bound > 8) throw std::runtime_error("omega search bound exceeded");
      std::vector<QVec> box;
      QVec cur(rank(), Rat(0));
      std::vector<long long> c(rank(), -bound);
      while (true) {
        QVec lam(rank());
        for (std::size_t i = 0; i < rank(); ++i) lam[i] = c[i];
        box.push_back(lam);
        std::size_t i = 0;
        while (i < rank() && ++c[i] > bound) c[i++] = -bound;
        if (i == rank()) break;
      }
      for (auto& lam : box) {
        for (auto& wm : datum.weyl_elements()) {
          AffElt a{lam, wm};
          if (length(a) != 0) continue;
          QVec res = residue(lam);
          if (residue_to_omega_.count(res)) continue;
          residue_to_omega_[res] = omega_.size();
          omega_.push_back({a, {}});
        }
      }
    }
    for (auto& oi : omega_) {
      oi.node_perm.assign(nodes, -1);
      for (std::size_t n = 0; n < nodes; ++n) {
        AffRoot img = act_affine_root(oi.rep, node_root[n]);
        for (std::size_t m = 0; m < nodes; ++m)
          if (node_root[m] == img) oi.node_perm[n] = static_cast<int>(m);
        if (oi.node_perm[n] < 0)
          throw std::logic_error("length-0 element does not permute the simple affine roots");
      }
    }
  }

  std::string finite_word(const QMat& w) const {
    datum.weyl_elements();
    for (std::size_t i = 0; i < datum.w_mats.size(); ++i) {
      if (datum.w_mats[i] == w) {
        std::string s;
        for (int letter : datum.w_words[i]) {
          if (!s.empty()) s += " ";
          s += datum.simple_names[letter];
        }
        return s;
      }
    }
    throw std::logic_error("matrix is not a Weyl element");
  }
};

}  // namespace alcove
