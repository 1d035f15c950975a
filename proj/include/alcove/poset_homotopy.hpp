#pragma once

// Finite posets, nerves, barycentric subdivision, rational simplicial
// homology, the proper-subset posets D_n with their weak elementary
// expansions, the star collapse after two subdivisions, and realizations of
// fibered poset data.

#include "alcove/numeric.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alcove {

namespace detail {

template <class T>
inline bool size_lex(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace detail

// --- posets -----------------------------------------------------------------

class Poset {
 public:
  Poset() = default;

  // Relations may be any list of order pairs; the order is their
  // reflexive-transitive closure. A cycle through distinct elements is
  // rejected.
  Poset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& relations,
        std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (labels_.empty())
      for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
    if (labels_.size() != n_) throw std::invalid_argument("one label per element");
    leq_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) leq_[i * n_ + i] = 1;
    for (auto& r : relations) {
      if (r.first >= n_ || r.second >= n_)
        throw std::invalid_argument("relation out of range");
      leq_[r.first * n_ + r.second] = 1;
    }
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        if (leq_[i * n_ + k])
          for (std::size_t j = 0; j < n_; ++j)
            if (leq_[k * n_ + j]) leq_[i * n_ + j] = 1;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (leq_[i * n_ + j] && leq_[j * n_ + i])
          throw std::invalid_argument("relations close into a cycle");
  }

  std::size_t size() const { return n_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * n_ + b] != 0; }
  bool lt(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  // Pairs (a, b) with a < b and nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> covering() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) {
        if (!lt(a, b)) continue;
        bool direct = true;
        for (std::size_t m = 0; m < n_ && direct; ++m)
          if (lt(a, m) && lt(m, b)) direct = false;
        if (direct) out.push_back({a, b});
      }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<char> leq_;
};

inline Poset induced(const Poset& p, const std::vector<std::size_t>& idx) {
  for (auto i : idx)
    if (i >= p.size()) throw std::invalid_argument("element index out of range");
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  std::vector<std::string> labels;
  for (auto i : idx) labels.push_back(p.label(i));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (i != j && p.lt(idx[i], idx[j])) rel.push_back({i, j});
  return Poset(idx.size(), rel, std::move(labels));
}

namespace detail {

inline void extend_chain(const Poset& p, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  out.push_back(cur);
  std::size_t last = cur.back();
  for (std::size_t f = 0; f < p.size(); ++f)
    if (p.lt(last, f)) {
      cur.push_back(f);
      extend_chain(p, cur, out);
      cur.pop_back();
    }
}

}  // namespace detail

// Every nonempty chain, elements listed in increasing poset order. Each chain
// appears once, rooted at its minimum.
inline std::vector<std::vector<std::size_t>> chains_of(const Poset& p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(1);
  for (std::size_t e = 0; e < p.size(); ++e) {
    cur.assign(1, e);
    detail::extend_chain(p, cur, out);
  }
  return out;
}

// --- simplicial complexes ---------------------------------------------------

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  // Input faces may repeat or nest; only the maximal ones are kept.
  static SimplicialComplex from_facets(std::vector<std::vector<int>> faces) {
    for (auto& f : faces) {
      if (f.empty()) throw std::invalid_argument("empty facet");
      std::sort(f.begin(), f.end());
      if (std::adjacent_find(f.begin(), f.end()) != f.end())
        throw std::invalid_argument("facet repeats a vertex");
    }
    std::sort(faces.begin(), faces.end(), detail::size_lex<int>);
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    SimplicialComplex c;
    for (auto& f : faces) {
      bool maximal = true;
      for (auto& g : faces) {
        if (g.size() <= f.size()) continue;
        if (std::includes(g.begin(), g.end(), f.begin(), f.end())) {
          maximal = false;
          break;
        }
      }
      if (maximal) c.facets_.push_back(f);
    }
    std::set<int> vs;
    for (auto& f : c.facets_) vs.insert(f.begin(), f.end());
    c.vertices_.assign(vs.begin(), vs.end());
    return c;
  }

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& facets() const { return facets_; }

  int dimension() const {
    int d = -1;
    for (auto& f : facets_) d = std::max<int>(d, (int)f.size() - 1);
    return d;
  }

  bool contains(std::vector<int> s) const {
    std::sort(s.begin(), s.end());
    for (auto& f : facets_)
      if (std::includes(f.begin(), f.end(), s.begin(), s.end())) return true;
    return false;
  }

  // Every nonempty face, sorted by dimension then lexicographically.
  std::vector<std::vector<int>> all_simplices() const {
    std::set<std::vector<int>> acc;
    for (auto& f : facets_) {
      std::size_t m = f.size();
      for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < m; ++i)
          if (mask & (std::size_t(1) << i)) s.push_back(f[i]);
        acc.insert(std::move(s));
      }
    }
    std::vector<std::vector<int>> out(acc.begin(), acc.end());
    std::sort(out.begin(), out.end(), detail::size_lex<int>);
    return out;
  }

  bool operator==(const SimplicialComplex& o) const {
    return vertices_ == o.vertices_ && facets_ == o.facets_;
  }
  bool operator!=(const SimplicialComplex& o) const { return !(*this == o); }

 private:
  std::vector<int> vertices_;
  std::vector<std::vector<int>> facets_;
};

namespace detail {

// Maximal members of a face-closed simplex set, without the quadratic scan:
// s is maximal iff no one-vertex extension of s lies in the set.
inline SimplicialComplex complex_of_closed_set(const std::set<std::vector<int>>& K) {
  std::set<int> vs;
  for (auto& s : K) vs.insert(s.begin(), s.end());
  std::vector<std::vector<int>> top;
  for (auto& s : K) {
    bool maximal = true;
    for (int v : vs) {
      if (std::binary_search(s.begin(), s.end(), v)) continue;
      std::vector<int> ext = s;
      ext.insert(std::upper_bound(ext.begin(), ext.end(), v), v);
      if (K.count(ext)) {
        maximal = false;
        break;
      }
    }
    if (maximal) top.push_back(s);
  }
  return SimplicialComplex::from_facets(std::move(top));
}

}  // namespace detail

// --- rational homology ------------------------------------------------------

// Exact rank of a sparse integer matrix, rows given as {column: entry}.
inline std::size_t sparse_int_rank(std::vector<std::map<std::size_t, Int>> rows) {
  std::size_t rank = 0;
  std::vector<char> used(rows.size(), 0);
  while (true) {
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!used[i] && !rows[i].empty() &&
          (best == rows.size() || rows[i].size() < rows[best].size()))
        best = i;
    if (best == rows.size()) break;
    used[best] = 1;
    ++rank;
    std::size_t pc = rows[best].begin()->first;
    Int pv = rows[best].begin()->second;
    for (auto& e : rows[best])
      if (boost::multiprecision::abs(e.second) < boost::multiprecision::abs(pv)) {
        pc = e.first;
        pv = e.second;
      }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (used[i]) continue;
      auto hit = rows[i].find(pc);
      if (hit == rows[i].end()) continue;
      Int g = boost::multiprecision::gcd(pv, hit->second);
      Int mp = pv / g, ma = hit->second / g;
      std::map<std::size_t, Int> next;
      for (auto& e : rows[i]) next[e.first] = e.second * mp;
      for (auto& e : rows[best]) {
        auto it = next.emplace(e.first, Int(0)).first;
        it->second -= e.second * ma;
        if (it->second == 0) next.erase(it);
      }
      Int content = 0;
      for (auto& e : next) content = boost::multiprecision::gcd(content, e.second);
      if (content > 1)
        for (auto& e : next) e.second /= content;
      rows[i] = std::move(next);
    }
  }
  return rank;
}

// Betti numbers over the rationals from boundary ranks. The simplex list must
// be face-closed; top_dim = -1 reports through the dimension of the complex.
inline std::vector<long long> homology_of_simplices(
    const std::vector<std::vector<int>>& simp, int top_dim) {
  int dim = -1;
  for (auto& s : simp) dim = std::max<int>(dim, (int)s.size() - 1);
  std::vector<std::vector<std::vector<int>>> bydim(dim + 1);
  for (auto& s : simp) bydim[s.size() - 1].push_back(s);
  std::map<std::vector<int>, std::size_t> index;
  for (auto& level : bydim) {
    std::sort(level.begin(), level.end());
    for (std::size_t i = 0; i < level.size(); ++i) index[level[i]] = i;
  }
  std::vector<std::size_t> ranks(dim + 2, 0);
  for (int k = 1; k <= dim; ++k) {
    std::vector<std::map<std::size_t, Int>> rows;
    rows.reserve(bydim[k].size());
    for (auto& s : bydim[k]) {
      std::map<std::size_t, Int> row;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<int> face;
        for (std::size_t i = 0; i < s.size(); ++i)
          if (i != drop) face.push_back(s[i]);
        row[index.at(face)] = (drop % 2 == 0) ? 1 : -1;
      }
      rows.push_back(std::move(row));
    }
    ranks[k] = sparse_int_rank(std::move(rows));
  }
  int top = top_dim >= 0 ? top_dim : dim;
  std::vector<long long> betti;
  for (int k = 0; k <= top; ++k) {
    long long nk = k <= dim ? (long long)bydim[k].size() : 0;
    long long rk = (k >= 1 && k <= dim) ? (long long)ranks[k] : 0;
    long long rk1 = k + 1 <= dim ? (long long)ranks[k + 1] : 0;
    betti.push_back(nk - rk - rk1);
  }
  return betti;
}

inline std::vector<long long> rational_homology(const SimplicialComplex& c,
                                                int top_dim = -1) {
  return homology_of_simplices(c.all_simplices(), top_dim);
}

// --- nerve and subdivision of a poset ---------------------------------------

inline SimplicialComplex nerve(const Poset& p) {
  std::vector<std::vector<int>> faces;
  for (auto& c : chains_of(p)) {
    bool maximal = true;
    for (std::size_t f = 0; f < p.size() && maximal; ++f) {
      if (std::find(c.begin(), c.end(), f) != c.end()) continue;
      bool comparable = true;
      for (auto e : c)
        if (!p.leq(e, f) && !p.leq(f, e)) {
          comparable = false;
          break;
        }
      if (comparable) maximal = false;
    }
    if (!maximal) continue;
    faces.emplace_back(c.begin(), c.end());
  }
  return SimplicialComplex::from_facets(std::move(faces));
}

// Elements are the nonempty chains, ordered by reverse containment: a chain
// is below every subchain of itself.
inline Poset sd(const Poset& p) {
  auto ch = chains_of(p);
  std::sort(ch.begin(), ch.end(), detail::size_lex<std::size_t>);
  std::vector<std::vector<std::size_t>> sorted = ch;
  for (auto& c : sorted) std::sort(c.begin(), c.end());
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < ch.size(); ++i)
    for (std::size_t j = 0; j < ch.size(); ++j)
      if (i != j && sorted[j].size() < sorted[i].size() &&
          std::includes(sorted[i].begin(), sorted[i].end(), sorted[j].begin(),
                        sorted[j].end()))
        rel.push_back({i, j});
  std::vector<std::string> labels;
  for (auto& c : ch) {
    std::string s;
    for (auto e : c) {
      if (!s.empty()) s += "<";
      s += p.label(e);
    }
    labels.push_back(s);
  }
  return Poset(ch.size(), rel, std::move(labels));
}

// --- the posets D_n and their expansions -------------------------------------

inline std::string render_int_subset(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

// Proper subsets of {0, ..., n}, sorted by size then lexicographically.
inline std::vector<std::vector<int>> dn_elements(int n) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  std::vector<std::vector<int>> out;
  for (std::size_t mask = 0; mask + 1 < (std::size_t(1) << (n + 1)); ++mask) {
    std::vector<int> s;
    for (int i = 0; i <= n; ++i)
      if (mask & (std::size_t(1) << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), detail::size_lex<int>);
  return out;
}

inline Poset build_Dn(int n) {
  auto el = dn_elements(n);
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = 0; j < el.size(); ++j)
      if (i != j && el[i].size() < el[j].size() &&
          std::includes(el[j].begin(), el[j].end(), el[i].begin(), el[i].end()))
        rel.push_back({i, j});
  std::vector<std::string> labels;
  for (auto& s : el) labels.push_back(render_int_subset(s));
  return Poset(el.size(), rel, std::move(labels));
}

namespace detail {

inline std::vector<int> checked_dn_subset(int n, std::vector<int> J) {
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  for (int j : J)
    if (j < 0 || j > n) throw std::invalid_argument("subset entry out of range");
  if (J.empty()) throw std::invalid_argument("the subset must be nonempty");
  if ((int)J.size() == n + 1) throw std::invalid_argument("the subset must be proper");
  return J;
}

}  // namespace detail

// Indices within build_Dn(n) of the subsets not contained in J.
inline std::vector<std::size_t> dn_not_contained(int n, std::vector<int> J) {
  J = detail::checked_dn_subset(n, std::move(J));
  auto el = dn_elements(n);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < el.size(); ++i)
    if (!std::includes(J.begin(), J.end(), el[i].begin(), el[i].end()))
      out.push_back(i);
  return out;
}

inline Poset build_Dn_J(int n, std::vector<int> J) {
  return induced(build_Dn(n), dn_not_contained(n, std::move(J)));
}

struct ExpansionCheck {
  bool ok = false;
  std::optional<std::size_t> fresh_min;  // the unique new minimal element
  std::string reason;
  explicit operator bool() const { return ok; }
};

// Tests whether p is a weak elementary expansion of the subposet on sub: the
// complement must have a unique minimal element 0, and the part of sub above
// 0 must be up-closed in p, connected and rationally acyclic.
inline ExpansionCheck is_weak_elementary_expansion(const Poset& p,
                                                   std::vector<std::size_t> sub) {
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  for (auto i : sub)
    if (i >= p.size()) throw std::invalid_argument("element index out of range");
  std::vector<char> in(p.size(), 0);
  for (auto i : sub) in[i] = 1;
  std::vector<std::size_t> comp;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!in[i]) comp.push_back(i);
  ExpansionCheck out;
  if (comp.empty()) {
    out.reason = "the complement is empty";
    return out;
  }
  std::vector<std::size_t> mins;
  for (auto a : comp) {
    bool minimal = true;
    for (auto b : comp)
      if (b != a && p.lt(b, a)) {
        minimal = false;
        break;
      }
    if (minimal) mins.push_back(a);
  }
  if (mins.size() != 1) {
    out.reason = "the complement has " + std::to_string(mins.size()) +
                 " minimal elements";
    return out;
  }
  out.fresh_min = mins[0];
  std::vector<std::size_t> up;
  for (auto i : sub)
    if (p.lt(mins[0], i)) up.push_back(i);
  if (up.empty()) {
    out.reason = "nothing in the subposet lies above the new element";
    return out;
  }
  for (auto i : up)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p.lt(i, j) && !in[j]) {
        out.reason = "the part above the new element is not up-closed";
        return out;
      }
  auto betti = rational_homology(nerve(induced(p, up)));
  bool point = !betti.empty() && betti[0] == 1;
  for (std::size_t k = 1; k < betti.size(); ++k)
    if (betti[k] != 0) point = false;
  if (!point) {
    out.reason = "the part above the new element is not acyclic";
    return out;
  }
  out.ok = true;
  return out;
}

// --- barycentric subdivision of a complex ------------------------------------

struct Subdivision {
  SimplicialComplex complex;
  std::vector<std::vector<int>> carrier;  // new vertex -> source simplex
};

// Vertices of the subdivision are the simplices of K in (dimension, lex)
// order; facets are the complete flags inside facets of K.
inline Subdivision subdivide(const SimplicialComplex& K) {
  Subdivision out;
  out.carrier = K.all_simplices();
  std::map<std::vector<int>, int> id;
  for (std::size_t i = 0; i < out.carrier.size(); ++i) id[out.carrier[i]] = (int)i;
  std::vector<std::vector<int>> faces;
  for (auto& f : K.facets()) {
    std::vector<int> perm = f;
    do {
      std::vector<int> flag, prefix;
      for (int v : perm) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
        flag.push_back(id.at(prefix));
      }
      std::sort(flag.begin(), flag.end());
      faces.push_back(std::move(flag));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  out.complex = SimplicialComplex::from_facets(std::move(faces));
  return out;
}

// The canonical copy of the twice-subdivided subcomplex inside the twice
// subdivided ambient complex. A vertex of sd(sd(Z)) is a chain of Z-simplices,
// which is in particular a chain of Y-simplices, hence a vertex of sd(sd(Y));
// the map on facets is induced. Built from Z's own subdivisions, so it is
// independent of how a collapse core was marked.
inline SimplicialComplex embedded_double_subdivision(const SimplicialComplex& Y,
                                                     const SimplicialComplex& Z) {
  for (auto& f : Z.facets())
    if (!Y.contains(f)) throw std::invalid_argument("not a subcomplex");
  Subdivision y1 = subdivide(Y);
  Subdivision z1 = subdivide(Z);
  std::map<std::vector<int>, int> y1_id;
  for (std::size_t i = 0; i < y1.carrier.size(); ++i) y1_id[y1.carrier[i]] = (int)i;
  std::vector<int> m1(z1.carrier.size());
  for (std::size_t v = 0; v < z1.carrier.size(); ++v) m1[v] = y1_id.at(z1.carrier[v]);

  Subdivision y2 = subdivide(y1.complex);
  Subdivision z2 = subdivide(z1.complex);
  std::map<std::vector<int>, int> y2_id;
  for (std::size_t i = 0; i < y2.carrier.size(); ++i) y2_id[y2.carrier[i]] = (int)i;
  std::vector<int> m2(z2.carrier.size());
  for (std::size_t v = 0; v < z2.carrier.size(); ++v) {
    std::vector<int> chain = z2.carrier[v];
    for (auto& t : chain) t = m1[t];
    std::sort(chain.begin(), chain.end());
    m2[v] = y2_id.at(chain);
  }
  std::vector<std::vector<int>> faces;
  for (auto f : z2.complex.facets()) {
    for (auto& t : f) t = m2[t];
    faces.push_back(std::move(f));
  }
  return SimplicialComplex::from_facets(std::move(faces));
}

// --- simplicial collapse ------------------------------------------------------

struct CollapseStep {
  std::vector<int> free_face;
  std::vector<int> coface;  // the unique maximal one at the time of removal
};
using CollapseSequence = std::vector<CollapseStep>;

namespace detail {

// Removes every simplex between tau and sigma inclusive.
inline void erase_interval(std::set<std::vector<int>>& K, const std::vector<int>& tau,
                           const std::vector<int>& sigma) {
  std::vector<int> extra;
  for (int v : sigma)
    if (!std::binary_search(tau.begin(), tau.end(), v)) extra.push_back(v);
  std::size_t m = extra.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    std::vector<int> g = tau;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t(1) << i))
        g.insert(std::upper_bound(g.begin(), g.end(), extra[i]), extra[i]);
    K.erase(g);
  }
}

// Cofaces of tau inside K, via the star of its first vertex.
inline std::vector<std::vector<int>> cofaces_in(
    const std::map<int, std::set<std::vector<int>>>& star, const std::vector<int>& tau) {
  std::vector<std::vector<int>> out;
  auto it = star.find(tau.front());
  if (it == star.end()) return out;
  for (auto& g : it->second)
    if (g.size() > tau.size() &&
        std::includes(g.begin(), g.end(), tau.begin(), tau.end()))
      out.push_back(g);
  return out;
}

// The unique maximal coface when tau is a free face; nullopt otherwise.
inline std::optional<std::vector<int>> free_face_top(
    const std::vector<std::vector<int>>& cof) {
  if (cof.empty()) return std::nullopt;
  std::optional<std::vector<int>> top;
  for (auto& g : cof) {
    bool maximal = true;
    for (auto& h : cof)
      if (h.size() > g.size() &&
          std::includes(h.begin(), h.end(), g.begin(), g.end())) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    if (top) return std::nullopt;
    top = g;
  }
  return top;
}

}  // namespace detail

struct StarCollapse {
  SimplicialComplex total;  // the ambient twice-subdivided complex
  SimplicialComplex star;   // closed star of the core, where the collapse starts
  SimplicialComplex core;   // the twice-subdivided subcomplex, where it ends
  CollapseSequence steps;
};

// After two barycentric subdivisions the closed star of the subdivided
// subcomplex collapses onto it. The removal order follows the once-subdivided
// carriers, largest first, then prefers simplices with more vertices outside
// the subcomplex; ties break lexicographically.
inline StarCollapse whitehead_collapse(const SimplicialComplex& Y,
                                       const SimplicialComplex& Z) {
  for (auto& f : Z.facets())
    if (!Y.contains(f)) throw std::invalid_argument("not a subcomplex");

  Subdivision s1 = subdivide(Y);
  std::vector<char> zvert1(s1.carrier.size(), 0);
  for (std::size_t v = 0; v < s1.carrier.size(); ++v)
    zvert1[v] = Z.contains(s1.carrier[v]) ? 1 : 0;

  Subdivision s2 = subdivide(s1.complex);
  std::vector<char> zvert2(s2.carrier.size(), 0);
  for (std::size_t v = 0; v < s2.carrier.size(); ++v) {
    bool all = true;
    for (int w : s2.carrier[v]) all = all && zvert1[w];
    zvert2[v] = all ? 1 : 0;
  }

  StarCollapse out;
  out.total = s2.complex;

  std::vector<std::vector<int>> star_facets;
  for (auto& f : out.total.facets())
    for (int v : f)
      if (zvert2[v]) {
        star_facets.push_back(f);
        break;
      }
  out.star = SimplicialComplex::from_facets(std::move(star_facets));

  std::set<std::vector<int>> core_set;
  for (auto& s : out.star.all_simplices()) {
    bool all = true;
    for (int v : s) all = all && zvert2[v];
    if (all) core_set.insert(s);
  }
  out.core = detail::complex_of_closed_set(core_set);

  // order the simplices to remove
  struct Item {
    std::vector<int> simplex, carrier;
    std::size_t outside;
  };
  std::vector<Item> order;
  for (auto& s : out.star.all_simplices()) {
    if (core_set.count(s)) continue;
    Item it;
    it.simplex = s;
    for (int v : s)
      if (s2.carrier[v].size() > it.carrier.size()) it.carrier = s2.carrier[v];
    it.outside = 0;
    for (int v : s)
      if (!zvert2[v]) ++it.outside;
    order.push_back(std::move(it));
  }
  std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    if (a.carrier.size() != b.carrier.size()) return a.carrier.size() > b.carrier.size();
    if (a.carrier != b.carrier) return a.carrier < b.carrier;
    if (a.outside != b.outside) return a.outside > b.outside;
    if (a.simplex.size() != b.simplex.size()) return a.simplex.size() > b.simplex.size();
    return a.simplex < b.simplex;
  });

  std::set<std::vector<int>> K;
  std::map<int, std::set<std::vector<int>>> star_of;
  for (auto& s : out.star.all_simplices()) {
    K.insert(s);
    for (int v : s) star_of[v].insert(s);
  }
  auto remove = [&](const std::vector<int>& tau, const std::vector<int>& sigma) {
    std::vector<int> extra;
    for (int v : sigma)
      if (!std::binary_search(tau.begin(), tau.end(), v)) extra.push_back(v);
    std::size_t m = extra.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
      std::vector<int> g = tau;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::size_t(1) << i))
          g.insert(std::upper_bound(g.begin(), g.end(), extra[i]), extra[i]);
      if (K.erase(g))
        for (int v : g) star_of[v].erase(g);
    }
  };

  while (K.size() > core_set.size()) {
    bool progressed = false;
    for (auto& it : order) {
      if (!K.count(it.simplex)) continue;
      auto top = detail::free_face_top(detail::cofaces_in(star_of, it.simplex));
      if (!top) continue;
      out.steps.push_back({it.simplex, *top});
      remove(it.simplex, *top);
      progressed = true;
      break;
    }
    if (!progressed)
      throw std::logic_error("the star fails to collapse onto the core");
  }
  return out;
}

struct CollapseCheck {
  bool ok = false;
  std::size_t failed_step = 0;  // 1-based; 0 flags a final-complex mismatch
  std::string reason;
  explicit operator bool() const { return ok; }
};

// Replays the removals, checking the free-face condition at every step and
// the final complex against the expected one.
inline CollapseCheck verify_collapse(const SimplicialComplex& start,
                                     const CollapseSequence& seq,
                                     const SimplicialComplex& expected) {
  std::set<std::vector<int>> K;
  std::map<int, std::set<std::vector<int>>> star_of;
  for (auto& s : start.all_simplices()) {
    K.insert(s);
    for (int v : s) star_of[v].insert(s);
  }
  CollapseCheck out;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    out.failed_step = n + 1;
    std::vector<int> tau = seq[n].free_face, sigma = seq[n].coface;
    std::sort(tau.begin(), tau.end());
    std::sort(sigma.begin(), sigma.end());
    if (!K.count(tau)) {
      out.reason = "the face is not in the complex";
      return out;
    }
    auto top = detail::free_face_top(detail::cofaces_in(star_of, tau));
    if (!top) {
      out.reason = "the face is not free";
      return out;
    }
    if (*top != sigma) {
      out.reason = "the recorded coface is not the maximal one";
      return out;
    }
    std::set<std::vector<int>> gone;
    for (auto& g : star_of[tau.front()])
      if (std::includes(g.begin(), g.end(), tau.begin(), tau.end()) &&
          std::includes(sigma.begin(), sigma.end(), g.begin(), g.end()))
        gone.insert(g);
    for (auto& g : gone) {
      K.erase(g);
      for (int v : g) star_of[v].erase(g);
    }
  }
  std::set<std::vector<int>> want;
  for (auto& s : expected.all_simplices()) want.insert(s);
  if (K != want) {
    out.failed_step = 0;
    out.reason = "the final complex is not the expected one";
    return out;
  }
  out.ok = true;
  return out;
}

// The complexes visited along a collapse: start, then one entry per step.
inline std::vector<SimplicialComplex> collapse_stages(const SimplicialComplex& start,
                                                      const CollapseSequence& seq) {
  std::vector<SimplicialComplex> out{start};
  std::set<std::vector<int>> K;
  for (auto& s : start.all_simplices()) K.insert(s);
  for (auto& step : seq) {
    std::vector<int> tau = step.free_face, sigma = step.coface;
    std::sort(tau.begin(), tau.end());
    std::sort(sigma.begin(), sigma.end());
    detail::erase_interval(K, tau, sigma);
    out.push_back(detail::complex_of_closed_set(K));
  }
  return out;
}

// --- realizations of fibered poset data --------------------------------------

// A set-valued functor on a finite poset: one fiber per element, one map per
// covering relation, composites required to agree along every route.
struct DSet {
  Poset base;
  std::vector<std::vector<std::string>> fibers;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
};

struct Realization {
  Poset tot;                 // all fiber elements; x <= y iff x maps to y upward
  SimplicialComplex complex; // nerve of tot, a subdivision of the glued space
  std::vector<std::size_t> offset;  // tot index of the first element of each fiber
};

inline Realization realize_dset(const DSet& ds) {
  const Poset& b = ds.base;
  if (ds.fibers.size() != b.size())
    throw std::invalid_argument("one fiber per base element");
  auto covers = b.covering();
  std::set<std::pair<std::size_t, std::size_t>> coverset(covers.begin(), covers.end());
  for (auto& kv : ds.maps)
    if (!coverset.count(kv.first))
      throw std::invalid_argument("transition not along a covering relation");
  for (auto& cv : covers) {
    auto it = ds.maps.find(cv);
    if (it == ds.maps.end())
      throw std::invalid_argument("missing transition for a covering relation");
    if (it->second.size() != ds.fibers[cv.first].size())
      throw std::invalid_argument("transition domain size mismatch");
    for (auto t : it->second)
      if (t >= ds.fibers[cv.second].size())
        throw std::invalid_argument("transition target out of range");
  }

  // transports along the order, checked for route independence
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> trans;
  std::vector<std::size_t> height(b.size(), 0);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.leq(i, j)) ++height[j];
  std::vector<std::size_t> topo(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) topo[i] = i;
  std::sort(topo.begin(), topo.end(), [&](std::size_t a, std::size_t c) {
    if (height[a] != height[c]) return height[a] < height[c];
    return a < c;
  });
  for (std::size_t i = 0; i < b.size(); ++i) {
    std::map<std::size_t, std::vector<std::size_t>> reach;
    std::vector<std::size_t> ident(ds.fibers[i].size());
    for (std::size_t x = 0; x < ident.size(); ++x) ident[x] = x;
    reach[i] = ident;
    for (auto j : topo) {
      if (!b.lt(i, j)) continue;
      for (auto& cv : covers) {
        if (cv.second != j || !b.leq(i, cv.first)) continue;
        auto from = reach.find(cv.first);
        if (from == reach.end()) continue;
        const auto& step = ds.maps.at(cv);
        std::vector<std::size_t> cand(from->second.size());
        for (std::size_t x = 0; x < cand.size(); ++x) cand[x] = step[from->second[x]];
        auto prev = reach.find(j);
        if (prev == reach.end())
          reach[j] = cand;
        else if (prev->second != cand)
          throw std::invalid_argument("transitions disagree along two routes");
      }
      if (reach.count(j)) trans[{i, j}] = reach[j];
    }
  }

  Realization out;
  out.offset.assign(b.size(), 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    out.offset[i] = total;
    total += ds.fibers[i].size();
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t x = 0; x < ds.fibers[i].size(); ++x)
      labels.push_back(b.label(i) + ":" + ds.fibers[i][x]);
  for (auto& kv : trans)
    for (std::size_t x = 0; x < kv.second.size(); ++x)
      rel.push_back({out.offset[kv.first.first] + x,
                     out.offset[kv.first.second] + kv.second[x]});
  out.tot = Poset(total, rel, std::move(labels));
  out.complex = nerve(out.tot);
  return out;
}

// --- structured text ----------------------------------------------------------

inline std::string render_complex(const SimplicialComplex& c) {
  std::string out;
  for (auto& f : c.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(f[i]);
    }
    out += "\n";
  }
  return out;
}

inline SimplicialComplex parse_complex(const std::string& text) {
  std::vector<std::vector<int>> faces;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream row(line);
    std::vector<int> face;
    int v;
    while (row >> v) face.push_back(v);
    if (!row.eof()) throw std::invalid_argument("bad facet line: " + line);
    if (!face.empty()) faces.push_back(std::move(face));
  }
  return SimplicialComplex::from_facets(std::move(faces));
}

inline std::string render_betti(const std::vector<long long>& b) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(b[i]);
  }
  return out;
}

}  // namespace alcove
