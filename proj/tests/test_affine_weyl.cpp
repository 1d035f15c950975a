#include "alcove/affine_weyl.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

using namespace alcove;

namespace {

// Word-length oracle: BFS distance from the length-0 elements by right
// multiplication with simple affine reflections.
std::map<AffElt, long long> bfs_lengths(const Aff& aff, long long L) {
  std::map<AffElt, long long> dist;
  std::vector<AffElt> frontier;
  for (auto& oi : aff.omega()) {
    dist[oi.rep] = 0;
    frontier.push_back(oi.rep);
  }
  for (long long depth = 1; depth <= L; ++depth) {
    std::vector<AffElt> next;
    for (auto& cur : frontier)
      for (std::size_t i = 0; i < aff.nodes; ++i) {
        AffElt nxt = aff.mul(cur, aff.node_refl[i]);
        if (dist.emplace(nxt, depth).second) next.push_back(nxt);
      }
    frontier = std::move(next);
  }
  return dist;
}

QVec iv(std::vector<long long> v) {
  QVec r;
  for (auto x : v) r.push_back(Rat(x));
  return r;
}

}  // namespace

TEST_CASE("group law, inverse, point action") {
  for (auto spec : {"A1:sc", "A1:ad", "A2:sc", "C2:sc", "G2"}) {
    Aff aff(build_root_datum(spec));
    auto elts = aff.enumerate_leq(3);
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
      auto& a = elts[rng.below(elts.size())];
      auto& b = elts[rng.below(elts.size())];
      AffElt ab = aff.mul(a, b);
      CHECK(aff.mul(ab, aff.inv(b)) == a);
      CHECK(aff.mul(aff.inv(a), ab) == b);
      QVec x(aff.rank());
      for (auto& c : x) c = Rat(rng.in_range(-9, 9), rng.in_range(1, 4));
      CHECK(aff.act_point(a, aff.act_point(b, x)) == aff.act_point(ab, x));
      // isometry of the invariant form
      QVec y(aff.rank());
      for (auto& c : y) c = Rat(rng.in_range(-9, 9), rng.in_range(1, 4));
      QVec dx = x + Rat(-1) * y;
      QVec dgx = aff.act_point(a, x) + Rat(-1) * aff.act_point(a, y);
      CHECK(aff.datum.form(dx, dx) == aff.datum.form(dgx, dgx));
    }
  }
}

TEST_CASE("affine root action is the functional pullback") {
  for (auto spec : {"A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    auto elts = aff.enumerate_leq(3);
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
      auto& a = elts[rng.below(elts.size())];
      auto& f = aff.node_root[rng.below(aff.nodes)];
      AffRoot g = aff.act_affine_root(a, f);
      QVec x(aff.rank());
      for (auto& c : x) c = Rat(rng.in_range(-9, 9), rng.in_range(1, 4));
      Rat lhs = g.c + aff.datum.pairing(g.cov, aff.act_point(a, x));
      Rat rhs = f.c + aff.datum.pairing(f.cov, x);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("length formula matches BFS word length") {
  for (auto spec : {"A1:sc", "A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    auto dist = bfs_lengths(aff, 6);
    // everything the formula says has length <= 6 was found by BFS, and lengths agree
    auto elts = aff.enumerate_leq(6);
    std::set<AffElt> enumerated(elts.begin(), elts.end());
    CHECK(elts.size() == dist.size());
    for (auto& [e, d] : dist) {
      CHECK(aff.length(e) == d);
      CHECK(enumerated.count(e) == 1);
    }
  }
}

TEST_CASE("translation lengths through the dominant cone") {
  for (auto spec : {"A1:sc", "A1:ad", "A2:sc", "C2:sc", "G2", "A1xA1:sc"}) {
    Aff aff(build_root_datum(spec));
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
      QVec lam(aff.rank());
      for (auto& c : lam) c = rng.in_range(-4, 4);
      QVec dom = aff.datum.dominant_representative(lam);
      Rat expect = aff.datum.pair_two_rho(dom);
      CHECK(Rat(aff.length(aff.translation(lam))) == expect);
    }
  }
}

TEST_CASE("conjugating a translation") {
  Aff aff(build_root_datum("C2:sc"));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    QVec lam(aff.rank());
    for (auto& c : lam) c = rng.in_range(-3, 3);
    auto& mats = aff.datum.weyl_elements();
    QMat w = mats[rng.below(mats.size())];
    AffElt fw{qvec_zero(aff.rank()), w};
    AffElt conj = aff.mul(aff.mul(fw, aff.translation(lam)), aff.inv(fw));
    CHECK(conj == aff.translation(w * lam));
  }
}

TEST_CASE("descents match length drops") {
  for (auto spec : {"A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    for (auto& w : aff.enumerate_leq(4)) {
      long long lw = aff.length(w);
      for (std::size_t i = 0; i < aff.nodes; ++i) {
        CHECK(aff.right_descent(w, i) == (aff.length(aff.mul(w, aff.node_refl[i])) < lw));
        CHECK(aff.left_descent(w, i) == (aff.length(aff.mul(aff.node_refl[i], w)) < lw));
      }
    }
  }
}

TEST_CASE("reduced words reconstruct") {
  for (auto spec : {"A1:sc", "A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    for (auto& w : aff.enumerate_leq(5)) {
      auto [letters, oi] = aff.reduced_word(w);
      CHECK(static_cast<long long>(letters.size()) == aff.length(w));
      AffElt prod = aff.identity();
      for (int l : letters) prod = aff.mul(prod, aff.node_refl[l]);
      prod = aff.mul(prod, aff.omega()[oi].rep);
      CHECK(prod == w);
    }
  }
}

TEST_CASE("omega components") {
  CHECK(Aff(build_root_datum("A1:sc")).omega_order() == 1);
  CHECK(Aff(build_root_datum("A2:sc")).omega_order() == 1);
  CHECK(Aff(build_root_datum("C2:sc")).omega_order() == 1);
  CHECK(Aff(build_root_datum("G2")).omega_order() == 1);
  CHECK(Aff(build_root_datum("A2:ad")).omega_order() == 3);
  CHECK(Aff(build_root_datum("C2:ad")).omega_order() == 2);
  CHECK(Aff(build_root_datum("A1xA1:ad")).omega_order() == 4);

  Aff pgl2(build_root_datum("A1:ad"));
  CHECK(pgl2.omega_order() == 2);
  // t_pi = s1 . omega: the fundamental coweight translation is not in W^a
  AffElt tpi = pgl2.translation(iv({1}));
  CHECK(pgl2.kappa(tpi) == pgl2.kappa(pgl2.omega()[1].rep));
  CHECK(pgl2.kappa(tpi) != pgl2.kappa(pgl2.identity()));
  CHECK(pgl2.length(pgl2.omega()[1].rep) == 0);
  // omega conjugation swaps the two nodes
  CHECK(pgl2.omega()[1].node_perm == std::vector<int>{1, 0});
  // omega^2 = 1 here
  CHECK(pgl2.mul(pgl2.omega()[1].rep, pgl2.omega()[1].rep) == pgl2.identity());

  // kappa is a homomorphism
  for (auto spec : {"A1:ad", "A2:ad", "C2:ad"}) {
    Aff aff(build_root_datum(spec));
    auto elts = aff.enumerate_leq(3);
    Rng rng(23);
    for (int t = 0; t < 25; ++t) {
      auto& a = elts[rng.below(elts.size())];
      auto& b = elts[rng.below(elts.size())];
      std::size_t expect = aff.kappa(
          aff.mul(aff.omega()[aff.kappa(a)].rep, aff.omega()[aff.kappa(b)].rep));
      CHECK(aff.kappa(aff.mul(a, b)) == expect);
    }
  }
}

TEST_CASE("enumeration counts") {
  Aff sl2(build_root_datum("A1:sc"));
  CHECK(sl2.enumerate_leq(0).size() == 1);
  CHECK(sl2.enumerate_leq(3).size() == 7);
  Aff pgl2(build_root_datum("A1:ad"));
  CHECK(pgl2.enumerate_leq(0).size() == 2);
  CHECK(pgl2.enumerate_leq(1).size() == 6);
  // sorted by length first
  auto elts = pgl2.enumerate_leq(2);
  for (std::size_t i = 1; i < elts.size(); ++i)
    CHECK(pgl2.length(elts[i - 1]) <= pgl2.length(elts[i]));
}

TEST_CASE("bruhat order against the subword oracle") {
  for (auto spec : {"A1:sc", "A1:ad", "A2:sc"}) {
    Aff aff(build_root_datum(spec));
    auto elts = aff.enumerate_leq(4);
    for (auto& b : elts) {
      auto [letters, oi] = aff.reduced_word(b);
      AffElt omega_rep = aff.omega()[oi].rep;
      std::set<AffElt> below;
      for (std::size_t mask = 0; mask < (std::size_t(1) << letters.size()); ++mask) {
        AffElt prod = aff.identity();
        for (std::size_t k = 0; k < letters.size(); ++k)
          if (mask >> k & 1) prod = aff.mul(prod, aff.node_refl[letters[k]]);
        below.insert(aff.mul(prod, omega_rep));
      }
      for (auto& a : elts) CHECK(aff.bruhat_leq(a, b) == (below.count(a) == 1));
    }
  }
}

TEST_CASE("coset minimization via brute force") {
  for (auto spec : {"A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    auto elts = aff.enumerate_leq(5);
    auto subsets = aff.finite_type_subsets();
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
      auto& w = elts[rng.below(elts.size())];
      auto& J = subsets[rng.below(subsets.size())];
      auto& K = subsets[rng.below(subsets.size())];
      auto wj = aff.parabolic_elements(J);
      auto wk = aff.parabolic_elements(K);

      AffElt best = w;
      for (auto& y : wj) {
        AffElt cand = aff.mul(y, w);
        if (aff.length(cand) < aff.length(best)) best = cand;
      }
      CHECK(aff.min_left_coset_rep(J, w) == best);
      CHECK(aff.is_min_left_rep(J, best));

      best = w;
      for (auto& y : wj)
        for (auto& z : wk) {
          AffElt cand = aff.mul(aff.mul(y, w), z);
          if (aff.length(cand) < aff.length(best)) best = cand;
        }
      AffElt got = aff.min_double_coset_rep(J, K, w);
      CHECK(aff.length(got) == aff.length(best));
      CHECK(got == best);  // the minimum is unique
    }
  }
}

TEST_CASE("finite type subsets") {
  Aff sl2(build_root_datum("A1:sc"));
  CHECK(sl2.finite_type_subsets().size() == 3);
  Aff a2(build_root_datum("A2:sc"));
  CHECK(a2.finite_type_subsets().size() == 7);
  Aff c2(build_root_datum("C2:sc"));
  CHECK(c2.finite_type_subsets().size() == 7);
  Aff prod(build_root_datum("A1xA1:sc"));
  CHECK(prod.finite_type_subsets().size() == 9);
  // every listed subset generates a finite parabolic; none contains a full factor
  for (auto& J : prod.finite_type_subsets()) {
    CHECK(prod.parabolic_elements(J).size() <= 4);
    CHECK(J.size() < 4);
  }
}

TEST_CASE("rendering and parsing") {
  Aff sl2(build_root_datum("A1:sc"));
  CHECK(sl2.render(sl2.identity()) == "1");
  CHECK(sl2.render(sl2.translation(iv({1}))) == "t[1]");
  CHECK(sl2.render(sl2.node_refl[0]) == "s1");
  CHECK(sl2.render(sl2.node_refl[1]) == "t[1]·s1");
  CHECK(sl2.node_name[1] == "s0");

  Aff pgl2(build_root_datum("A1:ad"));
  CHECK(pgl2.render(pgl2.omega()[1].rep) == "t[1]·s1");

  Aff a2(build_root_datum("A2:sc"));
  for (auto& w : a2.enumerate_leq(4)) CHECK(a2.parse(a2.render(w)) == w);
  Aff c2ad(build_root_datum("C2:ad"));
  for (auto& w : c2ad.enumerate_leq(3)) CHECK(c2ad.parse(c2ad.render(w)) == w);

  auto [letters, oi] = a2.reduced_word(a2.parse("t[1,1]"));
  CHECK(a2.render_word(letters).size() >= 2);
  CHECK(a2.length(a2.parse("t[1,1]")) == 4);
}

TEST_CASE("alcove geometry") {
  Aff sl2(build_root_datum("A1:sc"));
  // alcove [0, 1/2] in coroot coordinates
  auto verts = sl2.facet_vertices({});
  REQUIRE(verts.size() == 2);
  std::set<std::vector<Rat>> vs(verts.begin(), verts.end());
  CHECK(vs.count(QVec{Rat(0)}) == 1);
  CHECK(vs.count(QVec{Rat(1, 2)}) == 1);
  CHECK(sl2.facet_barycenter({}) == QVec{Rat(1, 4)});
  CHECK(sl2.facet_vertices({0}) == std::vector<QVec>{QVec{Rat(0)}});
  CHECK(sl2.facet_vertices({1}) == std::vector<QVec>{QVec{Rat(1, 2)}});

  Aff a2(build_root_datum("A2:sc"));
  auto tri = a2.facet_vertices({});
  CHECK(tri.size() == 3);
  auto bary = a2.facet_barycenter({});
  for (std::size_t n = 0; n < a2.nodes; ++n) {
    Rat v = a2.node_root[n].c + a2.datum.pairing(a2.node_root[n].cov, bary);
    CHECK(v > 0);
  }

  Rng rng(41);
  for (auto spec : {"A1:ad", "A2:sc", "C2:sc"}) {
    Aff aff(build_root_datum(spec));
    for (int t = 0; t < 25; ++t) {
      QVec x(aff.rank());
      for (auto& c : x) c = Rat(rng.in_range(-40, 40), rng.in_range(3, 7));
      auto walk = aff.walk_to_fundamental(x);
      CHECK(aff.act_point(walk.y, x) == walk.point);
      CHECK(aff.kappa(walk.y) == aff.kappa(aff.identity()));
      for (std::size_t n = 0; n < aff.nodes; ++n) {
        Rat v = aff.node_root[n].c + aff.datum.pairing(aff.node_root[n].cov, walk.point);
        CHECK(v >= 0);
        CHECK((v == 0) == (std::find(walk.J.begin(), walk.J.end(),
                                     static_cast<int>(n)) != walk.J.end()));
      }
    }
    // interior samples of facets stay in the closed alcove and vanish exactly on J
    for (auto& J : aff.finite_type_subsets()) {
      for (auto& p : aff.facet_samples(J, 3, rng)) {
        for (std::size_t n = 0; n < aff.nodes; ++n) {
          Rat v = aff.node_root[n].c + aff.datum.pairing(aff.node_root[n].cov, p);
          bool in_J = std::find(J.begin(), J.end(), static_cast<int>(n)) != J.end();
          CHECK(v >= 0);
          CHECK((v == 0) == in_J);
        }
      }
    }
  }
}
