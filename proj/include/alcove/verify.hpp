#pragma once

// End-to-end verification. Twelve independent checks tie the affine Weyl
// machinery, the piece classifier, the truncated complexes with their flow,
// the poset homotopy layer and the dual counting tables together. Every
// check is deterministic for a fixed seed: the result details never depend
// on wall time, so two runs with the same configuration print the same
// report. Checks with a stated time budget fail when they exceed it.

#include "alcove/bcomplex.hpp"
#include "alcove/dual_invariants.hpp"
#include "alcove/poset_homotopy.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alcove {

struct CriterionResult {
  std::string slug;
  std::string title;
  bool pass = false;
  std::string detail;  // one line, deterministic for a fixed seed
  double seconds = 0.0;
};

struct VerifyOptions {
  std::string tables_dir = "data/tables";
  std::vector<std::string> only;  // empty: run every criterion
  std::uint64_t seed = 0x5eeda11c;
};

namespace verify_detail {

struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::string first;  // description of the first failure
  void ok() { ++checks; }
  void fail(const std::string& what) {
    ++checks;
    ++failed;
    if (first.empty()) first = what;
  }
  void expect(bool cond, const std::string& what) {
    if (cond)
      ok();
    else
      fail(what);
  }
};

struct Group {
  RootDatum datum;
  Aff aff;
  Pieces pc;
  BComplex bc;
  explicit Group(const std::string& name)
      : datum(build_root_datum(name)), aff(datum), pc(aff), bc(pc) {}
};

class Session {
 public:
  VerifyOptions opt;
  explicit Session(VerifyOptions o) : opt(std::move(o)) {}

  Group& group(const std::string& name) {
    auto& slot = groups_[name];
    if (!slot) slot = std::make_unique<Group>(name);
    return *slot;
  }

 private:
  std::map<std::string, std::unique_ptr<Group>> groups_;
};

inline std::uint64_t mix(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : tag) h = (h ^ ch) * 0x100000001b3ull;
  return seed ^ h;
}

inline QVec qv(std::initializer_list<long long> entries) {
  QVec x;
  for (auto e : entries) x.push_back(Rat(e));
  return x;
}

inline std::vector<std::string> piece_names(const Group& g,
                                            const std::vector<Piece>& ps) {
  std::vector<std::string> out;
  for (auto& p : ps) out.push_back(g.pc.render_piece(p));
  return out;
}

inline AffElt random_elt(const Group& g, Rng& rng, int max_word) {
  AffElt w = g.aff.identity();
  auto n = rng.below(static_cast<std::uint64_t>(max_word) + 1);
  for (std::uint64_t i = 0; i < n; ++i)
    w = g.aff.mul(w, g.aff.node_refl[rng.below(g.aff.nodes)]);
  if (g.aff.omega_order() > 1 && rng.below(2) == 0)
    w = g.aff.mul(w, g.aff.omega()[rng.below(g.aff.omega_order())].rep);
  return w;
}

inline QVec random_point(const Group& g, Rng& rng) {
  QVec x;
  for (std::size_t i = 0; i < g.aff.rank(); ++i)
    x.push_back(Rat(rng.in_range(-12, 12), rng.in_range(1, 5)));
  return x;
}

inline long long rat_floor(const Rat& q) {
  Int n = boost::multiprecision::numerator(q);
  Int d = boost::multiprecision::denominator(q);
  Int f = n / d;
  if (n % d != 0 && n < 0) --f;
  return static_cast<long long>(f);
}

inline std::set<std::pair<std::size_t, std::size_t>> strict_order(
    const TruncatedBComplex& B) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (auto& pr : B.order)
    if (pr.first != pr.second) out.insert(pr);
  return out;
}

inline std::vector<long long> padded_betti(const SimplicialComplex& c, int n) {
  auto b = rational_homology(c);
  b.resize(static_cast<std::size_t>(n), 0);
  return b;
}

// --- 1: rank one truncations --------------------------------------------------

inline void run_sl2_figures(Session& s, Tally& t, std::string& detail) {
  auto& g = s.group("A1:sc");

  auto B1 = g.bc.build({qv({1}), 0}, 2);
  const std::vector<std::string> want1 = {"s1 s0/{}", "s0 s1/{}",
                                          "s0 s1/{s1}", "s1 s0/{s0}"};
  t.expect(piece_names(g, B1.facets) == want1, "positive slope facet list");
  t.expect(std::count(B1.essential.begin(), B1.essential.end(), 1) == 4,
           "positive slope essential flags");
  const std::set<std::pair<std::size_t, std::size_t>> cycle = {
      {0, 2}, {0, 3}, {1, 2}, {1, 3}};
  t.expect(strict_order(B1) == cycle, "positive slope closure order");

  auto B0 = g.bc.build({qv({0}), 0}, 3);
  const std::vector<std::string> want0 = {
      "s1 s0 s1/{}", "s1/{}",      "1/{}",         "s0/{}",
      "s0 s1 s0/{}", "1/{s1}",     "s0/{s1}",      "s0 s1 s0/{s1}",
      "s1 s0 s1/{s0}", "s1/{s0}",  "1/{s0}"};
  t.expect(piece_names(g, B0.facets) == want0, "slope zero facet list");
  const std::set<std::pair<std::size_t, std::size_t>> tree = {
      {0, 6}, {0, 8}, {1, 5}, {1, 9}, {2, 5},
      {2, 10}, {3, 6}, {3, 10}, {4, 7}, {4, 9}};
  t.expect(strict_order(B0) == tree, "slope zero closure order");

  // the incidence graph of the eleven strata is connected: with five edge
  // strata against six vertex strata that makes it a tree
  std::vector<std::size_t> root(B0.facets.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
  auto find = [&](std::size_t a) {
    while (root[a] != a) a = root[a] = root[root[a]];
    return a;
  };
  for (auto& pr : strict_order(B0)) root[find(pr.first)] = find(pr.second);
  std::set<std::size_t> comps;
  for (std::size_t i = 0; i < root.size(); ++i) comps.insert(find(i));
  std::size_t edges = 0, verts = 0;
  for (auto& p : B0.facets) (p.J.empty() ? edges : verts) += 1;
  t.expect(comps.size() == 1 && edges == 5 && verts == 6,
           "slope zero strata do not form a tree");

  const std::vector<std::string> core = {"1/{}", "1/{s1}", "1/{s0}"};
  t.expect(piece_names(g, g.bc.essential_part(B0)) == core,
           "slope zero essential part");

  detail =
      "slope one: 2 edge and 2 vertex strata in a cycle; slope zero: 5 edge "
      "and 6 vertex strata in a tree, essential part 1/{}, 1/{s1}, 1/{s0}";
}

// --- 2: adjoint rank one ------------------------------------------------------

inline void run_pgl2_newton(Session& s, Tally& t, std::string& detail) {
  auto& g = s.group("A1:ad");

  auto elems = g.aff.enumerate_leq(4);
  std::set<EnhancedNewtonPoint> got;
  for (auto& w : elems) got.insert(g.pc.newton_point(w));
  std::set<EnhancedNewtonPoint> want;
  for (long long n = 0; n <= 4; ++n)
    want.insert({QVec{Rat(n)}, static_cast<std::size_t>(n % 2)});
  want.insert({qv({0}), 1});
  t.expect(got == want, "Newton points over the length four ball");

  auto B = g.bc.build({qv({0}), 1}, 1);
  const std::vector<std::string> edge = {"ω/{}", "ω/{s1}", "ω/{s0}"};
  t.expect(piece_names(g, B.facets) == edge, "torsion edge facet list");
  t.expect(std::count(B.essential.begin(), B.essential.end(), 1) == 3,
           "torsion edge essential flags");
  const std::set<std::pair<std::size_t, std::size_t>> order = {{0, 1}, {0, 2}};
  t.expect(strict_order(B) == order, "torsion edge closure order");
  t.expect(piece_names(g, g.bc.essential_part(B)) == edge,
           "torsion edge essential part");

  std::ostringstream os;
  os << elems.size() << " elements realize 6 enhanced Newton points; the "
     << "torsion edge has 3 facets, all essential";
  detail = os.str();
}

// --- 3: conjugation invariance of the classifier -------------------------------

inline void run_sigma(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc", "C2:sc"};
  for (const char* ty : types) {
    auto& g = s.group(ty);
    auto Js = g.aff.finite_type_subsets();
    Rng rng(mix(s.opt.seed, std::string("sigma/") + ty));
    for (int trial = 0; trial < 500; ++trial) {
      const auto& J = Js[static_cast<std::size_t>(trial) % Js.size()];
      AffElt w = g.aff.identity();
      auto n = rng.below(9);
      for (std::uint64_t i = 0; i < n; ++i)
        w = g.aff.mul(w, g.aff.node_refl[rng.below(g.aff.nodes)]);
      AffElt z = g.aff.identity();
      if (!J.empty()) {
        auto m = rng.below(7);
        for (std::uint64_t i = 0; i < m; ++i)
          z = g.aff.mul(z, g.aff.node_refl[static_cast<std::size_t>(
                               J[rng.below(J.size())])]);
      }
      AffElt w2 = g.aff.mul(g.aff.mul(z, w), g.aff.inv(z));
      if (g.pc.sigma_J(J, w) == g.pc.sigma_J(J, w2))
        t.ok();
      else
        t.fail(std::string(ty) + " J=" + g.aff.render_subset(J) +
               " splits the class of " + g.aff.render(w));
    }
  }
  detail = "1500 seeded conjugation pairs across A1, A2 and C2 classify alike";
}

// --- 4: stage sequences recover minimal representatives ------------------------

inline void run_bedard(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc", "C2:sc"};
  std::size_t reps = 0;
  for (const char* ty : types) {
    auto& g = s.group(ty);
    auto elems = g.aff.enumerate_leq(6);
    for (auto& J : g.aff.finite_type_subsets()) {
      for (auto& u : elems) {
        if (!g.aff.is_min_left_rep(J, u)) continue;
        ++reps;
        Piece p = g.pc.sigma_J(J, u);
        t.expect(p.u == u, std::string(ty) + " classifier moved " +
                               g.aff.render(u) + " within ^JW for J=" +
                               g.aff.render_subset(J));
        AffElt prod = g.aff.identity();
        for (auto& st : p.bedard) prod = g.aff.mul(prod, st.u);
        t.expect(prod == u, std::string(ty) + " stage product misses " +
                                g.aff.render(u) + " for J=" +
                                g.aff.render_subset(J));
      }
    }
  }
  std::ostringstream os;
  os << reps << " minimal representatives rebuilt from their stage sequences";
  detail = os.str();
}

// --- 5: coarsening is coherent and idempotent ----------------------------------

inline void run_delta(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc", "C2:sc"};
  std::size_t triples = 0;
  for (const char* ty : types) {
    auto& g = s.group(ty);
    auto elems = g.aff.enumerate_leq(6);
    auto Js = g.aff.finite_type_subsets();
    for (auto& J : Js) {
      for (auto& Jbig : Js) {
        if (!std::includes(Jbig.begin(), Jbig.end(), J.begin(), J.end()))
          continue;
        for (auto& w : elems) {
          ++triples;
          Piece p = g.pc.sigma_J(J, w);
          Piece q = g.pc.delta(Jbig, p);
          t.expect(q == g.pc.sigma_J(Jbig, w),
                   std::string(ty) + " projection differs at " +
                       g.aff.render(w) + " for " + g.aff.render_subset(J) +
                       " into " + g.aff.render_subset(Jbig));
          t.expect(g.pc.delta(Jbig, q) == q,
                   std::string(ty) + " coarsening is not idempotent at " +
                       g.aff.render(w) + " for " + g.aff.render_subset(Jbig));
        }
      }
    }
  }
  std::ostringstream os;
  os << "coarsening checked on " << triples
     << " (subset pair, element) triples";
  detail = os.str();
}

// --- 6: Newton points against cosets and length --------------------------------

inline void run_newton_length(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc", "C2:sc", "A1:ad"};
  std::size_t translates = 0, straight = 0;
  for (const char* ty : types) {
    auto& g = s.group(ty);
    auto elems = g.aff.enumerate_leq(6);
    for (auto& J : g.aff.finite_type_subsets()) {
      for (auto& u : elems) {
        if (!g.aff.is_min_left_rep(J, u)) continue;
        Piece p = g.pc.sigma_J(J, u);
        for (auto& y : g.aff.parabolic_elements(p.K)) {
          ++translates;
          t.expect(g.pc.newton_point(g.aff.mul(u, y)) == p.newton,
                   std::string(ty) + " Newton point moves along the coset of " +
                       g.aff.render(u) + " for J=" + g.aff.render_subset(J));
        }
      }
    }
    for (auto& w : elems) {
      Rat len(g.aff.length(w));
      Rat pairing = g.aff.datum.pair_two_rho(g.pc.newton_point(w).nu);
      t.expect(len >= pairing, std::string(ty) +
                                   " length drops below the pairing at " +
                                   g.aff.render(w));
      bool tight = (len == pairing);
      if (tight) ++straight;
      t.expect(tight == g.pc.is_straight(w),
               std::string(ty) + " tightness disagrees with the power test at " +
                   g.aff.render(w));
    }
  }
  std::ostringstream os;
  os << translates << " coset translates keep their Newton point; the length "
     << "bound is tight exactly on " << straight << " straight elements";
  detail = os.str();
}

// --- 7: gradients against central differences ----------------------------------

inline void run_gradient(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc", "C2:sc"};
  const Rat h(1, 7);
  for (const char* ty : types) {
    auto& g = s.group(ty);
    Rng rng(mix(s.opt.seed, std::string("gradient/") + ty));
    for (int trial = 0; trial < 100; ++trial) {
      AffElt w = random_elt(g, rng, 6);
      ApartmentChart chart = g.bc.chart_from_element(w);
      QVec x = random_point(g, rng);
      QVec fg = chart.form * g.bc.henie_gradient(chart, x);
      for (std::size_t j = 0; j < g.aff.rank(); ++j) {
        QVec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Rat cd = (g.bc.henie_value(chart, xp) - g.bc.henie_value(chart, xm)) /
                 (Rat(2) * h);
        t.expect(cd == fg[j], std::string(ty) +
                                  " central difference misses the gradient of " +
                                  g.aff.render(w));
      }
      if (trial % 10 == 0) {
        // the critical set is stable; restricting there keeps the value,
        // kills the gradient, and the value vanishes exactly at fixed points
        AffineSubspace crit = g.bc.critical_set(chart);
        ApartmentChart r = g.bc.chart_restrict(chart, crit);
        t.expect(g.bc.henie_value(r, crit.base) ==
                     g.bc.henie_value(chart, crit.base),
                 std::string(ty) + " restricted value differs at the flow minimum");
        t.expect(g.bc.henie_gradient(r, crit.base) == qvec_zero(g.aff.rank()),
                 std::string(ty) + " restricted gradient is nonzero on the critical set");
        bool fixed = g.aff.act_point(w, crit.base) == crit.base;
        t.expect((g.bc.henie_value(chart, crit.base) == 0) == fixed,
                 std::string(ty) + " displacement vanishes away from a fixed point");
      }
    }
  }

  {
    auto& g = s.group("A1:sc");
    ApartmentChart cs = g.bc.chart_from_element(g.aff.node_refl[0]);
    AffineSubspace wall = AffineSubspace::make(qv({0}), std::vector<QVec>{});
    ApartmentChart r = g.bc.chart_restrict(cs, wall);
    t.expect(g.bc.henie_value(r, qv({0})) == 0 &&
                 g.bc.henie_gradient(r, qv({0})) == qv({0}),
             "wall restriction is not flat");
  }
  {
    auto& g = s.group("A1xA1:sc");
    AffElt flip = g.aff.mul(g.aff.node_refl[0], g.aff.node_refl[1]);
    ApartmentChart full = g.bc.chart_from_element(flip);
    AffineSubspace diag = AffineSubspace::make(qv({0, 0}), {qv({1, 1})});
    ApartmentChart r = g.bc.chart_restrict(full, diag);
    Rng rng(mix(s.opt.seed, "gradient/diagonal"));
    for (int trial = 0; trial < 10; ++trial) {
      Rat c(rng.in_range(-12, 12), rng.in_range(1, 5));
      QVec x{c, c};
      t.expect(g.bc.henie_value(full, x) == g.bc.henie_value(r, x),
               "diagonal restriction changes the value");
      t.expect(g.bc.henie_gradient(full, x) == g.bc.henie_gradient(r, x),
               "diagonal restriction changes the gradient");
    }
  }
  detail =
      "300 charts match exact central differences; restrictions agree on "
      "walls, critical sets and the diagonal";
}

// --- 8: flows stay inside downward families ------------------------------------

inline void run_flow(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A2:sc"};
  std::size_t families = 0, flows = 0;
  for (const char* ty : types) {
    auto& g = s.group(ty);
    std::set<EnhancedNewtonPoint> points;
    for (auto& w : g.aff.enumerate_leq(6)) points.insert(g.pc.newton_point(w));
    CoarseType top = g.pc.coarse_type_of({});
    for (auto& nt : points) {
      Rat ess = g.aff.datum.pair_two_rho(nt.nu);
      for (long long n = rat_floor(ess) + 1; Rat(n) <= ess + 3; ++n) {
        std::ostringstream key;
        key << ty << " nu=" << to_string(nt.nu) << "," << nt.omega
            << " L=" << n;
        auto B = g.bc.build(nt, n);
        auto spec = g.bc.downward_spec(B, {{n, top}});
        auto rep =
            g.bc.verify_contraction(B, spec, 5, mix(s.opt.seed, key.str()));
        ++families;
        flows += rep.checks.size();
        t.expect(rep.violation_count == 0,
                 key.str() + " has flow violations");
      }
    }
  }
  std::ostringstream os;
  os << families << " downward families, " << flows
     << " sampled flows, no violations";
  detail = os.str();
}

// --- 9: truncated subset posets -------------------------------------------------

inline void run_expansions(Session&, Tally& t, std::string& detail) {
  std::size_t complexes = 0;
  for (int n = 1; n <= 4; ++n) {
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << (n + 1)); ++mask) {
      std::vector<int> J;
      for (int b = 0; b <= n; ++b)
        if (mask >> b & 1) J.push_back(b);
      auto betti = rational_homology(nerve(build_Dn_J(n, J)));
      bool point = !betti.empty() && betti[0] == 1;
      for (std::size_t k = 1; k < betti.size(); ++k)
        if (betti[k] != 0) point = false;
      ++complexes;
      std::ostringstream what;
      what << "truncation of the subsets of {0..," << n << "} away from "
           << render_int_subset(J) << " is not acyclic";
      t.expect(point, what.str());
    }
  }

  auto chk = is_weak_elementary_expansion(build_Dn(1), {1});
  t.expect(chk.ok && chk.fresh_min.has_value() && *chk.fresh_min == 0,
           "the one-element truncation fails to expand: " + chk.reason);

  auto hollow = SimplicialComplex::from_facets({{0, 1}, {0, 2}, {1, 2}});
  t.expect(rational_homology(hollow) == std::vector<long long>{1, 1},
           "the hollow triangle control lost its circle");

  std::ostringstream os;
  os << complexes << " truncations are connected and acyclic; the one-element "
     << "truncation expands; the hollow triangle keeps its circle";
  detail = os.str();
}

// --- 10: star collapses --------------------------------------------------------

inline void run_collapse(Session& s, Tally& t, std::string& detail) {
  Rng rng(verify_detail::mix(s.opt.seed, "collapse"));
  std::size_t total_steps = 0;
  int built = 0;
  for (int guard = 0; built < 10 && guard < 1000; ++guard) {
    int nv = 5 + static_cast<int>(rng.below(3));
    int nf = 3 + static_cast<int>(rng.below(3));
    std::vector<std::vector<int>> faces;
    for (int f = 0; f < nf; ++f) {
      std::set<int> fv;
      auto sz = 1 + rng.below(3);
      for (std::uint64_t k = 0; k < sz; ++k)
        fv.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(nv))));
      faces.emplace_back(fv.begin(), fv.end());
    }
    auto Y = SimplicialComplex::from_facets(faces);
    if (Y.vertices().size() < 2) continue;
    std::set<int> keep;
    for (int v : Y.vertices())
      if (rng.below(2) == 0) keep.insert(v);
    if (keep.empty() || keep.size() == Y.vertices().size()) continue;
    std::vector<std::vector<int>> zf;
    for (auto& simp : Y.all_simplices()) {
      bool inside = true;
      for (int v : simp) inside = inside && keep.count(v) > 0;
      if (inside) zf.push_back(simp);
    }
    if (zf.empty()) continue;
    auto Z = SimplicialComplex::from_facets(zf);

    std::string tag = "pair " + std::to_string(built);
    auto sc = whitehead_collapse(Y, Z);
    auto chk = verify_collapse(sc.star, sc.steps, sc.core);
    t.expect(chk.ok, tag + " fails replay at step " +
                         std::to_string(chk.failed_step) + ": " + chk.reason);
    t.expect(sc.core == embedded_double_subdivision(Y, Z),
             tag + " ends away from the embedded double subdivision");
    int dims = sc.star.dimension() + 1;
    auto stages = collapse_stages(sc.star, sc.steps);
    auto want = padded_betti(stages.front(), dims);
    for (auto& st : stages)
      t.expect(padded_betti(st, dims) == want, tag + " changes its Betti numbers");
    total_steps += sc.steps.size();
    ++built;
  }
  t.expect(built == 10, "the generator failed to produce ten pairs");
  std::ostringstream os;
  os << "10 star collapses with " << total_steps
     << " elementary steps end at the embedded double subdivision with "
     << "constant Betti numbers";
  detail = os.str();
}

// --- 11: dual counting tables ---------------------------------------------------

inline void run_dual(Session& s, Tally& t, std::string& detail) {
  auto tables = load_table_dir(s.opt.tables_dir);
  std::vector<PairDatum> chi_all, c_all;
  for (auto& p : tables) (p.side == "chi" ? chi_all : c_all).push_back(p);

  struct Want {
    const char* chi_group;
    const char* c_group;
    std::size_t records;
  };
  const std::vector<Want> wants = {{"SL2", "PGL2", 2},
                                   {"SL3", "PGL3", 3},
                                   {"SL4", "PGL4", 4},
                                   {"Sp4", "SO5", 2},
                                   {"G2", "G2", 1}};
  for (auto& w : wants) {
    std::vector<PairDatum> chis, cs;
    for (auto& p : chi_all)
      if (p.group == w.chi_group) chis.push_back(p);
    for (auto& p : c_all)
      if (p.group == w.c_group) cs.push_back(p);
    std::string pair = std::string(w.chi_group) + "/" + w.c_group;
    t.expect(chis.size() == w.records && cs.size() == w.records,
             pair + " record counts are off");
    auto m = match_tables(chis, cs, 3);
    t.expect(m.ok, pair + (m.problems.empty()
                               ? std::string(" failed to match")
                               : ": " + m.problems.front()));
    t.expect(m.chi_halfdim_sum == m.c_halfdim_sum,
             pair + " dimension sums differ");
    auto fchi = endomorphism_fingerprint(chis, 3);
    auto fc = endomorphism_fingerprint(cs, 3);
    for (auto& pr : m.pairs) {
      const Fingerprint& fa = fchi[pr.first];
      const Fingerprint& fb = fc[pr.second];
      t.expect(fa.counts == fb.counts && fa.graded == fb.graded,
               pair + " graded fingerprints differ at " +
                   record_name(chis[pr.first]));
    }
  }

  auto all = match_tables(chi_all, c_all, 3);
  t.expect(all.ok && all.pairs.size() == 12,
           std::string("whole shelf: ") +
               (all.problems.empty() ? "match failed" : all.problems.front()));

  const PairDatum* principal = nullptr;
  for (auto& p : chi_all)
    if (p.group == "SL2" && p.index == 0) principal = &p;
  t.expect(principal != nullptr, "the rank one principal record is missing");
  if (principal) {
    auto ser = orbit_series(*principal, 3);
    t.expect(ser.counts == std::vector<long long>{1, 5, 13, 25},
             "principal series counts are off");
    for (long long k = 0; k <= 3; ++k)
      t.expect(ser.counts[static_cast<std::size_t>(k)] ==
                   orbit_count_direct(*principal, k),
               "principal series disagrees with direct orbit enumeration at "
               "radius " + std::to_string(k));
  }
  detail =
      "5 dual pairs with record counts 2,3,4,2,1 match through radius 3; "
      "principal series 1,5,13,25";
}

// --- 12: independent oracles ----------------------------------------------------

inline void run_oracles(Session& s, Tally& t, std::string& detail) {
  const char* types[] = {"A1:sc", "A1:ad", "A2:sc", "C2:sc"};
  std::size_t elements = 0;
  for (const char* ty : types) {
    auto& g = s.group(ty);
    auto elems = g.aff.enumerate_leq(6);
    std::map<AffElt, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);

    std::vector<long long> dist(elems.size(), -1);
    std::deque<std::size_t> queue;
    std::set<AffElt> sources;
    sources.insert(g.aff.identity());
    for (auto& oi : g.aff.omega()) sources.insert(oi.rep);
    for (auto& src : sources) {
      auto it = index.find(src);
      if (it == index.end()) {
        t.fail(std::string(ty) + " is missing a length zero source");
        continue;
      }
      dist[it->second] = 0;
      queue.push_back(it->second);
    }
    while (!queue.empty()) {
      std::size_t at = queue.front();
      queue.pop_front();
      for (std::size_t node = 0; node < g.aff.nodes; ++node) {
        auto it = index.find(g.aff.mul(elems[at], g.aff.node_refl[node]));
        if (it == index.end() || dist[it->second] >= 0) continue;
        dist[it->second] = dist[at] + 1;
        queue.push_back(it->second);
      }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
      ++elements;
      t.expect(dist[i] == g.aff.length(elems[i]),
               std::string(ty) + " graph distance differs from length at " +
                   g.aff.render(elems[i]));
    }
  }

  auto tables = load_table_dir(s.opt.tables_dir);
  std::size_t crosses = 0;
  for (auto& p : tables) {
    if (p.rank > 2) continue;
    auto ser = orbit_series(p, 3);
    for (long long k = 0; k <= 3; ++k) {
      ++crosses;
      t.expect(ser.counts[static_cast<std::size_t>(k)] ==
                   orbit_count_direct(p, k),
               record_name(p) + " averaged count differs from the direct one "
               "at radius " + std::to_string(k));
    }
  }
  std::ostringstream os;
  os << elements << " lengths equal graph distance; " << crosses
     << " averaged orbit counts equal their direct enumeration";
  detail = os.str();
}

struct CriterionSpec {
  const char* slug;
  const char* title;
  double budget;  // seconds, 0 when unlimited
  void (*fn)(Session&, Tally&, std::string&);
};

inline const std::vector<CriterionSpec>& criterion_specs() {
  static const std::vector<CriterionSpec> specs = {
      {"sl2-figures", "rank one truncations match the reference figures", 1.0,
       run_sl2_figures},
      {"pgl2-newton", "adjoint rank one Newton points and the torsion edge",
       1.0, run_pgl2_newton},
      {"sigma", "the classifier is constant on twisted conjugation classes",
       30.0, run_sigma},
      {"bedard", "stage sequences recover their minimal representatives", 0.0,
       run_bedard},
      {"delta", "coarsening commutes with the classifier and is idempotent",
       0.0, run_delta},
      {"newton-length", "Newton points are coset-stable and bound the length",
       0.0, run_newton_length},
      {"gradient", "closed-form gradients match exact central differences",
       0.0, run_gradient},
      {"flow", "gradient flows stay inside every downward family", 60.0,
       run_flow},
      {"expansions", "proper-subset truncations are connected and acyclic",
       0.0, run_expansions},
      {"collapse", "double subdivision stars collapse onto their cores", 0.0,
       run_collapse},
      {"dual", "shipped dual tables match by orbit fingerprint", 30.0,
       run_dual},
      {"oracles", "lengths and orbit counts agree with independent oracles",
       0.0, run_oracles},
  };
  return specs;
}

}  // namespace verify_detail

inline std::vector<CriterionResult> run_verification(
    const VerifyOptions& opt = {}) {
  const auto& specs = verify_detail::criterion_specs();
  for (auto& name : opt.only) {
    bool known = false;
    for (auto& sp : specs) known = known || name == sp.slug;
    if (!known) throw std::invalid_argument("unknown criterion: " + name);
  }

  verify_detail::Session session(opt);
  std::vector<CriterionResult> out;
  for (auto& sp : specs) {
    if (!opt.only.empty() &&
        std::find(opt.only.begin(), opt.only.end(), sp.slug) == opt.only.end())
      continue;
    CriterionResult r;
    r.slug = sp.slug;
    r.title = sp.title;
    verify_detail::Tally tally;
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    try {
      sp.fn(session, tally, detail);
      r.pass = tally.failed == 0;
      if (r.pass) {
        r.detail = detail;
      } else {
        std::ostringstream os;
        os << tally.failed << " of " << tally.checks
           << " checks failed; first: " << tally.first;
        r.detail = os.str();
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (r.pass && sp.budget > 0 && r.seconds > sp.budget) {
      r.pass = false;
      std::ostringstream os;
      os << "completed but exceeded the " << sp.budget << "s budget";
      r.detail = os.str();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace alcove
