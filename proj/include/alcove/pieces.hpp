#pragma once

// Combinatorial pieces of the extended affine Weyl group: the map sigma_J via
// the Bedard sequence, transition maps between parahoric levels, relevant
// affine subspaces, coarse types, Newton points, straightness, the Omega
// action, and the bounded >=_J order.

#include "alcove/affine_weyl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace alcove {

struct CoarseType {
  std::vector<int> rep;  // canonical finite-type subset
  bool operator==(const CoarseType& o) const { return rep == o.rep; }
  bool operator<(const CoarseType& o) const { return rep < o.rep; }
};

struct EnhancedNewtonPoint {
  QVec nu;            // dominant rational coweight
  std::size_t omega;  // kappa component
  bool operator==(const EnhancedNewtonPoint& o) const {
    return nu == o.nu && omega == o.omega;
  }
  bool operator<(const EnhancedNewtonPoint& o) const {
    if (nu != o.nu) return nu < o.nu;
    return omega < o.omega;
  }
};

struct BedardStage {
  std::vector<int> J, Jp;  // J_n and J'_n
  AffElt u;
};

struct Piece {
  std::vector<int> J;
  AffElt u;  // minimal coset representative in ^J W~
  std::vector<BedardStage> bedard;
  std::vector<int> K;       // I(J, u), the stable value
  AffineSubspace j_type;    // W_J-orbit tag of the fixed subspace of W_K
  CoarseType coarse_type;
  EnhancedNewtonPoint newton;

  bool operator==(const Piece& o) const { return J == o.J && u == o.u; }
  bool operator<(const Piece& o) const {
    if (J != o.J) return J < o.J;
    return u < o.u;
  }
};

class Pieces {
 public:
  const Aff& aff;

  explicit Pieces(const Aff& a) : aff(a) {}

  // --- affine subspaces ------------------------------------------------

  // Fixed subspace of W_K: intersection of the simple affine hyperplanes in K.
  AffineSubspace subspace_of(const std::vector<int>& K) const {
    std::size_t r = aff.rank();
    QMat A(K.size(), r);
    QVec b(K.size(), Rat(0));
    for (std::size_t i = 0; i < K.size(); ++i) {
      for (std::size_t k = 0; k < r; ++k) A.at(i, k) = aff.node_root[K[i]].cov[k];
      b[i] = -aff.node_root[K[i]].c;
    }
    auto base = K.empty() ? std::make_optional(qvec_zero(r)) : solve(A, b);
    if (!base) throw std::logic_error("subset walls do not intersect");
    auto dirs = nullspace(A);
    return AffineSubspace::make(*base, dirs);
  }

  AffineSubspace act_subspace(const AffElt& g, const AffineSubspace& s) const {
    std::vector<QVec> dirs;
    for (std::size_t i = 0; i < s.dirs.rows; ++i)
      dirs.push_back(g.w * RootDatum::row(s.dirs, i));
    return AffineSubspace::make(aff.act_point(g, s.base), dirs);
  }

  // Does the W^a-orbit of `point` meet `s`?  W^a = Q^vee x W, so this asks
  // whether some w*point + (coroot lattice) intersects s: an integer lattice
  // membership problem over the conormal coordinates of s.
  bool orbit_meets(const QVec& point, const AffineSubspace& s) const {
    auto conormals = nullspace(s.dirs);
    if (conormals.empty()) return true;
    for (auto& wm : aff.datum.weyl_elements()) {
      QVec wp = wm * point;
      std::vector<QVec> gens(aff.rank(), QVec(conormals.size(), Rat(0)));
      QVec target(conormals.size(), Rat(0));
      for (std::size_t i = 0; i < conormals.size(); ++i) {
        for (std::size_t j = 0; j < aff.rank(); ++j) {
          QVec coroot = RootDatum::col(aff.datum.simple_coroots, j);
          for (std::size_t k = 0; k < aff.rank(); ++k)
            gens[j][i] += conormals[i][k] * coroot[k];
        }
        for (std::size_t k = 0; k < aff.rank(); ++k)
          target[i] += conormals[i][k] * (s.base[k] - wp[k]);
      }
      // scale each coordinate row to integers
      for (std::size_t i = 0; i < conormals.size(); ++i) {
        Int l(1);
        auto fold = [&l](const Rat& q) {
          Int d = Int(boost::multiprecision::denominator(q));
          l = boost::multiprecision::lcm(l, d);
        };
        for (auto& gvec : gens) fold(gvec[i]);
        fold(target[i]);
        for (auto& gvec : gens) gvec[i] *= Rat(l);
        target[i] *= Rat(l);
      }
      if (integer_lattice_contains(gens, target)) return true;
    }
    return false;
  }

  // Generic point of the fixed subspace of W_K: the barycenter of its facet.
  QVec generic_point(const std::vector<int>& K) const {
    return aff.facet_barycenter(K);
  }

  // Some element of W^a moves the fixed subspace of M onto that of K.
  bool types_equivalent(const std::vector<int>& M, const std::vector<int>& K) const {
    if (M.size() != K.size()) return false;
    return orbit_meets(generic_point(M), subspace_of(K));
  }

  // --- coarse types ---------------------------------------------------------

  CoarseType coarse_type_of(const std::vector<int>& K) const {
    build_coarse_table();
    auto it = coarse_canon_.find(K);
    if (it == coarse_canon_.end()) throw std::invalid_argument("not a finite-type subset");
    return {it->second};
  }

  // a <= b in the containment-up-to-W^a order (whole apartment on top).
  bool coarse_type_leq(const CoarseType& a, const CoarseType& b) const {
    return orbit_meets(generic_point(a.rep), subspace_of(b.rep));
  }

  // --- Newton points and straightness -------------------------------------

  EnhancedNewtonPoint newton_point(const AffElt& w) const {
    std::size_t r = aff.rank();
    QMat m = w.w;
    std::size_t order = 1;
    while (!(m == QMat::identity(r))) {
      m = m * w.w;
      ++order;
      if (order > aff.datum.weyl_order()) throw std::logic_error("finite order overflow");
    }
    AffElt p = w;
    for (std::size_t k = 1; k < order; ++k) p = aff.mul(p, w);
    if (!(p.w == QMat::identity(r))) throw std::logic_error("power is not a translation");
    QVec nu = Rat(1, static_cast<long long>(order)) * p.lam;
    return {aff.datum.dominant_representative(nu), aff.kappa(w)};
  }

  bool is_straight(const AffElt& w) const {
    EnhancedNewtonPoint np = newton_point(w);
    bool by_length = Rat(aff.length(w)) == aff.datum.pair_two_rho(np.nu);
    // cross-check against the defining power condition
    std::size_t order = 1;
    QMat m = w.w;
    while (!(m == QMat::identity(aff.rank()))) m = m * w.w, ++order;
    bool by_powers = true;
    AffElt p = aff.identity();
    for (std::size_t k = 1; k <= 2 * order; ++k) {
      p = aff.mul(p, w);
      if (aff.length(p) != static_cast<long long>(k) * aff.length(w)) by_powers = false;
    }
    if (by_length != by_powers)
      throw std::logic_error("straightness criteria disagree");
    return by_length;
  }

  // --- I(J, u) and the Bedard sequence -------------------------------------

  // Largest subset of J whose reflections are permuted by conjugation with u.
  // The reflection u s u^{-1} has affine root +-(u . alpha_s), so membership is
  // tested up to sign.
  std::vector<int> I_of(const std::vector<int>& J, const AffElt& u) const {
    std::vector<int> K = J;
    AffElt ui = aff.inv(u);
    while (true) {
      std::vector<int> next;
      for (int s : K) {
        auto in_K = [&](const AffRoot& f) {
          AffRoot neg{Rat(-1) * f.cov, -f.c};
          for (int t : K)
            if (aff.node_root[t] == f || aff.node_root[t] == neg) return true;
          return false;
        };
        if (in_K(aff.act_affine_root(u, aff.node_root[s])) &&
            in_K(aff.act_affine_root(ui, aff.node_root[s])))
          next.push_back(s);
      }
      if (next == K) return K;
      K = next;
    }
  }

  Piece sigma_J(const std::vector<int>& J, const AffElt& w) const {
    check_finite_type(J);
    auto memo = sigma_cache_.find({J, w});
    if (memo != sigma_cache_.end()) return memo->second;
    auto wj = aff.parabolic_elements(J);
    std::set<AffElt> cls;
    for (auto& z : wj) cls.insert(aff.mul(aff.mul(z, w), aff.inv(z)));

    std::vector<BedardStage> seq;
    AffElt u0 = aff.min_double_coset_rep(J, J, w);
    seq.push_back({J, J, u0});
    AffElt prefix = u0;
    std::vector<int> Jprev = J;
    while (true) {
      auto [Jn, Jpn] = next_subsets(Jprev, prefix);
      // c_n = {x in W_{J_{n-1}} : prefix * x in the class}; all its members
      // share one (J'_n, J_n)-double coset
      AffElt un = aff.identity();
      bool found = false;
      for (auto& x : aff.parabolic_elements(Jprev)) {
        if (cls.count(aff.mul(prefix, x))) {
          un = aff.min_double_coset_rep(Jpn, Jn, x);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("empty stage set in the piece induction");
      seq.push_back({Jn, Jpn, un});
      bool stable = (Jn == Jprev) && (un == aff.identity());
      prefix = aff.mul(prefix, un);
      Jprev = Jn;
      if (stable) break;
      if (seq.size() > J.size() + 2) throw std::logic_error("piece induction did not stabilize");
    }
    Piece out = finish_piece(J, prefix, std::move(seq));
    sigma_cache_.emplace(std::make_pair(J, w), out);
    return out;
  }

  Piece bedard_from_min_rep(const std::vector<int>& J, const AffElt& u) const {
    check_finite_type(J);
    if (!aff.is_min_left_rep(J, u))
      throw std::invalid_argument("element is not minimal in its coset");
    std::vector<BedardStage> seq;
    AffElt u0 = aff.min_double_coset_rep(J, J, u);
    seq.push_back({J, J, u0});
    AffElt prefix = u0;
    AffElt x = aff.mul(aff.inv(u0), u);
    std::vector<int> Jprev = J;
    while (true) {
      auto [Jn, Jpn] = next_subsets(Jprev, prefix);
      AffElt un = aff.min_right_coset_rep(x, Jn);
      seq.push_back({Jn, Jpn, un});
      bool stable = (Jn == Jprev) && (un == aff.identity());
      prefix = aff.mul(prefix, un);
      x = aff.mul(aff.inv(un), x);
      Jprev = Jn;
      if (stable) {
        if (!(x == aff.identity()))
          throw std::invalid_argument("element is not minimal in its coset");
        break;
      }
      if (seq.size() > J.size() + 2) throw std::logic_error("piece induction did not stabilize");
    }
    return finish_piece(J, u, std::move(seq));
  }

  // --- transition and symmetry maps ----------------------------------------

  Piece delta(const std::vector<int>& Jbig, const Piece& p) const {
    for (int j : p.J)
      if (std::find(Jbig.begin(), Jbig.end(), j) == Jbig.end())
        throw std::invalid_argument("target subset does not contain the source");
    return sigma_J(Jbig, p.u);
  }

  Piece omega_act(std::size_t oi, const Piece& p) const {
    const AffElt& rep = aff.omega()[oi].rep;
    AffElt u = aff.mul(aff.mul(rep, p.u), aff.inv(rep));
    return bedard_from_min_rep(aff.omega_on_subset(oi, p.J), u);
  }

  bool is_quasi_reduced(const Piece& p, const std::vector<int>& Jbig) const {
    return aff.length(p.u) == aff.length(delta(Jbig, p).u);
  }

  bool is_reduced(const Piece& p, const std::vector<int>& Jbig) const {
    Piece q = delta(Jbig, p);
    return aff.length(p.u) == aff.length(q.u) && p.coarse_type == q.coarse_type;
  }

  // --- relevant subspace of a pair (J, w) -----------------------------------

  // Minimal w-stable intersection of affine root hyperplanes containing the
  // fixed subspace of W_J.  Largest (w, w^{-1})-closed set of such hyperplanes,
  // then intersect; stability of each hyperplane individually is not enough.
  AffineSubspace E_Jw(const std::vector<int>& J, const AffElt& w) const {
    AffineSubspace aj = subspace_of(J);
    std::vector<AffRoot> hyps;
    for (auto& e : aff.datum.positive_roots) {
      bool vanishes = true;
      for (std::size_t i = 0; i < aj.dirs.rows; ++i)
        if (aff.datum.pairing(e.covector, RootDatum::row(aj.dirs, i)) != 0)
          vanishes = false;
      if (!vanishes) continue;
      Rat c = -aff.datum.pairing(e.covector, aj.base);
      if (boost::multiprecision::denominator(c) != 1) continue;
      hyps.push_back({e.covector, c});
    }
    auto canon = [this](AffRoot f) {
      if (!aff.finite_root_positive(f.cov)) {
        f.cov = Rat(-1) * f.cov;
        f.c = -f.c;
      }
      return f;
    };
    AffElt wi = aff.inv(w);
    bool removed = true;
    while (removed) {
      removed = false;
      std::vector<AffRoot> keep;
      for (auto& h : hyps) {
        auto has = [&](const AffRoot& f) {
          for (auto& g : hyps)
            if (g == f) return true;
          return false;
        };
        if (has(canon(aff.act_affine_root(w, h))) && has(canon(aff.act_affine_root(wi, h))))
          keep.push_back(h);
        else
          removed = true;
      }
      hyps = std::move(keep);
    }
    std::size_t r = aff.rank();
    QMat A(hyps.size(), r);
    QVec b(hyps.size(), Rat(0));
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      for (std::size_t k = 0; k < r; ++k) A.at(i, k) = hyps[i].cov[k];
      b[i] = -hyps[i].c;
    }
    auto base = hyps.empty() ? std::make_optional(qvec_zero(r)) : solve(A, b);
    if (!base) throw std::logic_error("stable hyperplane family is inconsistent");
    return AffineSubspace::make(*base, nullspace(A));
  }

  // W_J-orbit tag of an affine subspace: the least translate.
  AffineSubspace j_orbit_tag(const std::vector<int>& J, const AffineSubspace& s) const {
    AffineSubspace best = s;
    bool first = true;
    for (auto& y : aff.parabolic_elements(J)) {
      AffineSubspace t = act_subspace(y, s);
      if (first || t < best) best = t, first = false;
    }
    return best;
  }

  // --- enumeration and the bounded order ------------------------------------

  struct ClassEntry {
    AffElt rep;  // lexicographically least member of minimal length
    Piece piece;
  };

  // One entry per W_J-conjugacy class meeting length <= L.
  std::vector<ClassEntry> enumerate_classes(const std::vector<int>& J, long long L) const {
    check_finite_type(J);
    long long diam = 0;
    for (auto& y : aff.parabolic_elements(J)) diam = std::max(diam, aff.length(y));
    long long cap = L + 2 * diam;

    std::map<AffElt, bool> visited;
    std::vector<ClassEntry> out;
    for (auto& seed : aff.enumerate_leq(L)) {
      if (visited.count(seed)) continue;
      // flood the class within the cap
      std::vector<AffElt> stack{seed}, members;
      visited[seed] = true;
      while (!stack.empty()) {
        AffElt cur = stack.back();
        stack.pop_back();
        members.push_back(cur);
        for (int j : J) {
          AffElt nxt = aff.mul(aff.mul(aff.node_refl[j], cur), aff.node_refl[j]);
          if (aff.length(nxt) > cap) continue;
          if (visited.emplace(nxt, true).second) stack.push_back(nxt);
        }
      }
      AffElt best = seed;
      long long best_len = aff.length(seed);
      for (auto& m : members) {
        long long lm = aff.length(m);
        if (lm < best_len || (lm == best_len && m < best)) best = m, best_len = lm;
      }
      out.push_back({best, sigma_J(J, best)});
    }
    std::sort(out.begin(), out.end(), [this](const ClassEntry& a, const ClassEntry& b) {
      long long la = aff.length(a.rep), lb = aff.length(b.rep);
      if (la != lb) return la < lb;
      return a.rep < b.rep;
    });
    return out;
  }

  // u >= u' in the bounded J-order: some member of the W_J-class of u' within
  // the length cap sits below u in Bruhat order.
  bool geq_J(const std::vector<int>& J, const AffElt& u, const AffElt& uprime,
             long long bound) const {
    check_finite_type(J);
    long long diam = 0;
    for (auto& y : aff.parabolic_elements(J)) diam = std::max(diam, aff.length(y));
    long long cap = bound + 2 * diam;
    std::map<AffElt, bool> visited{{uprime, true}};
    std::vector<AffElt> stack{uprime};
    while (!stack.empty()) {
      AffElt cur = stack.back();
      stack.pop_back();
      if (aff.bruhat_leq(cur, u)) return true;
      for (int j : J) {
        AffElt nxt = aff.mul(aff.mul(aff.node_refl[j], cur), aff.node_refl[j]);
        if (aff.length(nxt) > cap) continue;
        if (visited.emplace(nxt, true).second) stack.push_back(nxt);
      }
    }
    return false;
  }

  // --- rendering ------------------------------------------------------------

  std::string render_piece(const Piece& p) const {
    return aff.render_word_form(p.u) + "/" + aff.render_subset(p.J);
  }

 private:
  mutable std::map<std::vector<int>, std::vector<int>> coarse_canon_;
  mutable std::map<std::pair<std::vector<int>, AffElt>, Piece> sigma_cache_;

  void check_finite_type(const std::vector<int>& J) const {
    for (auto& ok : aff.finite_type_subsets())
      if (ok == J) return;
    throw std::invalid_argument("subset is not finite type");
  }

  // J_n and J'_n from J_{n-1} and the prefix u_0...u_{n-1}.
  std::pair<std::vector<int>, std::vector<int>> next_subsets(
      const std::vector<int>& Jprev, const AffElt& prefix) const {
    AffElt pi = aff.inv(prefix);
    auto transport = [this, &Jprev](const AffElt& g) {
      std::vector<int> out;
      for (int i : Jprev) {
        AffRoot img = aff.act_affine_root(g, aff.node_root[i]);
        for (int j : Jprev)
          if (aff.node_root[j] == img) out.push_back(j);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    return {transport(prefix), transport(pi)};
  }

  Piece finish_piece(const std::vector<int>& J, const AffElt& u,
                     std::vector<BedardStage> seq) const {
    if (!aff.is_min_left_rep(J, u))
      throw std::logic_error("piece product is not a minimal coset representative");
    Piece p;
    p.J = J;
    p.u = u;
    p.K = seq.back().J;
    p.bedard = std::move(seq);
    p.j_type = j_orbit_tag(J, subspace_of(p.K));
    p.coarse_type = coarse_type_of(p.K);
    p.newton = newton_point(u);
    return p;
  }

  void build_coarse_table() const {
    if (!coarse_canon_.empty()) return;
    auto subsets = aff.finite_type_subsets();  // sorted by size then lex
    for (auto& K : subsets) {
      std::vector<int> canon = K;
      for (auto& M : subsets) {
        if (M.size() != K.size() || !(M < canon)) continue;
        if (types_equivalent(M, K)) canon = M;
      }
      coarse_canon_[K] = canon;
    }
  }
};

}  // namespace alcove
