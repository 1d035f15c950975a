#pragma once

// Length-truncated slices of the family of pieces sharing one enhanced
// Newton point, and the displacement flow that contracts a downward family
// onto its essential facets.
//
// A chart is an affine subspace E of the apartment together with an element
// w of the extended group carrying E into itself.  The displacement
// f(x) = |x - w(x)|^2 in the invariant form restricts to a quadratic on E
// whose negative gradient flow is affine-linear; its limits therefore have a
// closed form, the form-orthogonal projection onto the critical locus.
// verify_contraction re-integrates the flow explicitly (rational Euler
// steps, then a floating-point rerun) and reports every violated
// expectation instead of stopping at the first.

#include "alcove/pieces.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace alcove {

struct ApartmentChart {
  AffineSubspace E;   // chart domain
  QMat amb_mat;       // ambient action x -> amb_mat * x + amb_shift
  QVec amb_shift;
  QMat w_bar;         // the same action in direction coordinates of E
  QVec w_shift;
  QMat form;          // invariant form restricted to the directions of E
  AffElt provenance;  // group element the chart was built from
};

struct TruncatedBComplex {
  EnhancedNewtonPoint nu_tilde;
  long long bound = 0;   // length truncation
  Rat essential_length;  // pairing of 2 rho with the Newton point
  std::vector<Piece> facets;
  std::vector<char> essential;  // parallel to facets
  // Closure order as index pairs (i, j): facets[i] <= facets[j], meaning
  // J_i is contained in J_j and the transition map sends facet i to facet j.
  std::vector<std::pair<std::size_t, std::size_t>> order;
};

struct DownwardCut {
  long long bound = 0;
  CoarseType type;
};

// A downward family inside one truncation: the essential facets together
// with everything at or below at least one (length, coarse type) cut.
struct DownwardSpec {
  EnhancedNewtonPoint nu_tilde;
  std::vector<DownwardCut> cuts;
  std::vector<Piece> facets;  // sorted
};

struct FlowCheck {
  Piece facet;  // facet the sample was drawn from
  QVec sample;
  QVec limit;  // exact flow limit
  Piece limit_piece;
  std::vector<std::string> violations;
};

struct ContractionReport {
  std::vector<FlowCheck> checks;
  std::size_t violation_count = 0;
};

class BComplex {
 public:
  const Pieces& pc;
  const Aff& aff;

  explicit BComplex(const Pieces& p) : pc(p), aff(p.aff) {}

  // --- truncated complexes ----------------------------------------------

  TruncatedBComplex build(const EnhancedNewtonPoint& nt, long long bound) const {
    TruncatedBComplex B;
    B.nu_tilde = nt;
    B.bound = bound;
    B.essential_length = aff.datum.pair_two_rho(nt.nu);
    if (Rat(bound) < B.essential_length)
      throw std::invalid_argument("truncation bound below the essential length");
    std::vector<AffElt> candidates;
    for (auto& u : aff.enumerate_leq(bound))
      if (pc.newton_point(u) == nt) candidates.push_back(u);
    for (auto& J : aff.finite_type_subsets())
      for (auto& u : candidates)
        if (aff.is_min_left_rep(J, u))
          B.facets.push_back(pc.bedard_from_min_rep(J, u));
    std::sort(B.facets.begin(), B.facets.end());
    for (auto& p : B.facets)
      B.essential.push_back(Rat(aff.length(p.u)) == B.essential_length ? 1 : 0);
    for (std::size_t i = 0; i < B.facets.size(); ++i)
      for (std::size_t j = 0; j < B.facets.size(); ++j) {
        if (!contains_sorted(B.facets[j].J, B.facets[i].J)) continue;
        if (pc.delta(B.facets[j].J, B.facets[i]) == B.facets[j])
          B.order.push_back({i, j});
      }
    return B;
  }

  std::vector<Piece> essential_part(const TruncatedBComplex& B) const {
    std::vector<Piece> out;
    for (std::size_t i = 0; i < B.facets.size(); ++i)
      if (B.essential[i]) out.push_back(B.facets[i]);
    return out;
  }

  DownwardSpec downward_spec(const TruncatedBComplex& B,
                             std::vector<DownwardCut> cuts) const {
    DownwardSpec d;
    d.nu_tilde = B.nu_tilde;
    d.cuts = std::move(cuts);
    for (std::size_t i = 0; i < B.facets.size(); ++i) {
      bool keep = B.essential[i] != 0;
      for (auto& c : d.cuts) {
        if (keep) break;
        keep = aff.length(B.facets[i].u) <= c.bound &&
               pc.coarse_type_leq(B.facets[i].coarse_type, c.type);
      }
      if (keep) d.facets.push_back(B.facets[i]);
    }
    return d;
  }

  // A family is downward when it contains every essential facet and is
  // closed under simultaneously decreasing length and coarse type.  Both
  // conditions are checked exhaustively against the truncation.
  bool is_downward(const TruncatedBComplex& B, const std::vector<Piece>& sub) const {
    std::set<Piece> all(B.facets.begin(), B.facets.end());
    std::set<Piece> have;
    for (auto& p : sub) {
      if (!all.count(p))
        throw std::invalid_argument("candidate facet outside the truncation");
      have.insert(p);
    }
    for (std::size_t i = 0; i < B.facets.size(); ++i)
      if (B.essential[i] && !have.count(B.facets[i])) return false;
    for (auto& p : B.facets) {
      if (have.count(p)) continue;
      for (auto& q : sub)
        if (aff.length(p.u) <= aff.length(q.u) &&
            pc.coarse_type_leq(p.coarse_type, q.coarse_type))
          return false;
    }
    return true;
  }

  // --- charts -------------------------------------------------------------

  ApartmentChart chart_from_element(const AffElt& w) const {
    std::size_t r = aff.rank();
    ApartmentChart c;
    c.E = AffineSubspace::make(qvec_zero(r), QMat::identity(r));
    c.amb_mat = w.w;
    c.amb_shift = w.lam;
    c.w_bar = w.w;
    c.w_shift = w.lam;
    c.form = aff.datum.invariant_form;
    c.provenance = w;
    check_chart(c);
    return c;
  }

  // Restriction to a stable affine subspace of the chart domain.
  ApartmentChart chart_restrict(const ApartmentChart& c, const AffineSubspace& sub) const {
    if (!c.E.contains(sub))
      throw std::invalid_argument("chart domain does not contain the subspace");
    QVec image_base = c.amb_mat * sub.base + c.amb_shift;
    std::vector<QVec> image_dirs;
    for (std::size_t i = 0; i < sub.dirs.rows; ++i)
      image_dirs.push_back(c.amb_mat * RootDatum::row(sub.dirs, i));
    if (!(AffineSubspace::make(image_base, image_dirs) == sub))
      throw std::invalid_argument("subspace is not stable under the chart element");

    QMat N = transpose(sub.dirs);  // columns are the direction basis
    std::size_t k = sub.dirs.rows;
    ApartmentChart out;
    out.E = sub;
    out.amb_mat = c.amb_mat;
    out.amb_shift = c.amb_shift;
    out.w_bar = QMat(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      auto z = solve(N, image_dirs[j]);
      if (!z) throw std::logic_error("stable subspace image left the direction span");
      for (std::size_t i = 0; i < k; ++i) out.w_bar.at(i, j) = (*z)[i];
    }
    auto sh = solve(N, image_base - sub.base);
    if (!sh) throw std::logic_error("stable subspace image left the direction span");
    out.w_shift = *sh;
    out.form = transpose(N) * (aff.datum.invariant_form * N);
    out.provenance = c.provenance;
    check_chart(out);
    return out;
  }

  // Squared displacement of x under the chart element, in the invariant form.
  Rat henie_value(const ApartmentChart& c, const QVec& x) const {
    if (!c.E.contains_point(x))
      throw std::invalid_argument("point outside the chart domain");
    QVec d = c.amb_mat * x + c.amb_shift - x;
    return dot(aff.datum.invariant_form, d, d);
  }

  // Gradient of the restricted displacement at x, as an ambient vector
  // tangent to the chart domain.
  QVec henie_gradient(const ApartmentChart& c, const QVec& x) const {
    QMat N = transpose(c.E.dirs);
    auto y = solve(N, x - c.E.base);
    if (!y) throw std::invalid_argument("point outside the chart domain");
    if (c.E.dim() == 0) return qvec_zero(aff.rank());
    QMat step = c.w_bar - QMat::identity(c.E.dim());
    QVec d = step * *y + c.w_shift;
    QVec rhs = transpose(step) * (c.form * d);
    auto gi = inverse(c.form);
    if (!gi) throw std::logic_error("restricted form is degenerate");
    return N * (Rat(2) * (*gi * rhs));
  }

  // Critical locus of the displacement on the chart domain; always nonempty.
  AffineSubspace critical_set(const ApartmentChart& c) const {
    std::size_t k = c.E.dim();
    QMat step = c.w_bar - QMat::identity(k);
    QMat A = transpose(step) * (c.form * step);
    QVec b = Rat(-1) * (transpose(step) * (c.form * c.w_shift));
    auto y0 = solve(A, b);
    if (!y0) throw std::logic_error("critical system is inconsistent");
    QMat N = transpose(c.E.dirs);
    QVec base = c.E.base + N * *y0;
    std::vector<QVec> dirs;
    for (auto& z : nullspace(A)) dirs.push_back(N * z);
    return AffineSubspace::make(base, dirs);
  }

  // The piece whose facet contains x, read through the chart.
  Piece facet_of_point(const ApartmentChart& c, const QVec& x) const {
    if (c.E.dim() != aff.rank())
      throw std::invalid_argument("the chart map needs the whole apartment");
    auto walk = aff.walk_to_fundamental(x);
    AffElt conj = aff.mul(aff.mul(walk.y, c.provenance), aff.inv(walk.y));
    return pc.sigma_J(walk.J, conj);
  }

  // Limit of the negative gradient flow started at x: the form-orthogonal
  // projection onto the critical locus.  Only full-apartment charts flow.
  QVec flow_limit_point(const ApartmentChart& c, const QVec& x) const {
    if (c.E.dim() != aff.rank())
      throw std::invalid_argument("flow limits need a chart on the whole apartment");
    AffineSubspace crit = critical_set(c);
    if (crit.dim() == 0) return crit.base;
    QMat Nc = transpose(crit.dirs);
    const QMat& F = aff.datum.invariant_form;
    auto gram_inv = inverse(transpose(Nc) * (F * Nc));
    if (!gram_inv) throw std::logic_error("critical directions are degenerate");
    QVec z = *gram_inv * (transpose(Nc) * (F * (x - crit.base)));
    return crit.base + Nc * z;
  }

  std::pair<QVec, Piece> flow_limit(const ApartmentChart& c, const QVec& x) const {
    QVec lim = flow_limit_point(c, x);
    Piece p = facet_of_point(c, lim);
    Rat ess = aff.datum.pair_two_rho(pc.newton_point(c.provenance).nu);
    if (!(Rat(aff.length(p.u)) == ess))
      throw std::logic_error("flow limit facet is not essential");
    return {lim, p};
  }

  // Floating-point Euler integration of the same flow, for cross-checking
  // the exact limit.  Returns the ambient endpoint.
  std::vector<double> flow_limit_numeric(const ApartmentChart& c, const QVec& x,
                                         double h = 1.0 / 64,
                                         std::size_t steps = 10000) const {
    std::size_t k = c.E.dim();
    QMat N = transpose(c.E.dirs);
    auto y0 = solve(N, x - c.E.base);
    if (!y0) throw std::invalid_argument("point outside the chart domain");
    if (k == 0) {
      std::vector<double> fixed(aff.rank());
      for (std::size_t i = 0; i < aff.rank(); ++i) fixed[i] = to_double(c.E.base[i]);
      return fixed;
    }
    QMat step = c.w_bar - QMat::identity(k);
    auto gi = inverse(c.form);
    if (!gi) throw std::logic_error("restricted form is degenerate");
    QMat A = Rat(2) * (*gi * (transpose(step) * (c.form * step)));
    QVec b = Rat(2) * (*gi * (transpose(step) * (c.form * c.w_shift)));
    std::vector<double> Ad(k * k), bd(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
      bd[i] = to_double(b[i]);
      y[i] = to_double((*y0)[i]);
      for (std::size_t j = 0; j < k; ++j) Ad[i * k + j] = to_double(A.at(i, j));
    }
    std::vector<double> g(k);
    for (std::size_t s = 0; s < steps; ++s) {
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = bd[i];
        for (std::size_t j = 0; j < k; ++j) g[i] += Ad[i * k + j] * y[j];
      }
      for (std::size_t i = 0; i < k; ++i) y[i] -= h * g[i];
    }
    std::vector<double> out(aff.rank());
    for (std::size_t i = 0; i < aff.rank(); ++i) {
      out[i] = to_double(c.E.base[i]);
      for (std::size_t j = 0; j < k; ++j) out[i] += to_double(N.at(i, j)) * y[j];
    }
    return out;
  }

  // --- flow verification ---------------------------------------------------

  // Samples every facet of the family, flows each sample, and checks that
  // the exact limit lands on an essential facet inside the family, that a
  // rational Euler path stays inside with strictly decreasing displacement,
  // and that floating-point integration reproduces the exact limit.
  ContractionReport verify_contraction(const TruncatedBComplex& B,
                                       const DownwardSpec& spec,
                                       std::size_t samples_per_facet = 5,
                                       std::uint64_t seed = 0x77a9) const {
    if (!is_downward(B, spec.facets))
      throw std::invalid_argument("family is not downward");
    ContractionReport rep;
    std::set<Piece> family(spec.facets.begin(), spec.facets.end());
    Rat ess = aff.datum.pair_two_rho(spec.nu_tilde.nu);
    Rng rng(seed);
    for (auto& p : spec.facets) {
      ApartmentChart c = chart_from_element(p.u);
      for (auto& x : aff.facet_samples(p.J, samples_per_facet, rng)) {
        FlowCheck fc;
        fc.facet = p;
        fc.sample = x;
        std::set<std::string> bad;
        if (!(facet_of_point(c, x) == p)) bad.insert("sample facet mismatch");
        fc.limit = flow_limit_point(c, x);
        fc.limit_piece = facet_of_point(c, fc.limit);
        if (!(Rat(aff.length(fc.limit_piece.u)) == ess))
          bad.insert("flow limit is not essential");
        if (!family.count(fc.limit_piece)) bad.insert("flow limit leaves the family");

        QVec y = x;
        Rat f = henie_value(c, y);
        Rat h(1, 32);
        for (int s = 0; s < 96; ++s) {
          QVec g = henie_gradient(c, y);
          if (is_zero(g)) break;
          y = y - h * g;
          Rat fn = henie_value(c, y);
          if (!(fn < f)) bad.insert("flow value failed to decrease");
          f = fn;
          if (!family.count(facet_of_point(c, y)))
            bad.insert("flow path leaves the family");
        }

        auto yd = flow_limit_numeric(c, x);
        for (std::size_t i = 0; i < yd.size(); ++i) {
          double diff = yd[i] - to_double(fc.limit[i]);
          if (diff < 0) diff = -diff;
          if (diff > 1e-6) {
            bad.insert("numeric flow disagrees with the exact limit");
            break;
          }
        }

        fc.violations.assign(bad.begin(), bad.end());
        rep.violation_count += fc.violations.size();
        rep.checks.push_back(std::move(fc));
      }
    }
    return rep;
  }

  static double to_double(const Rat& q) { return q.convert_to<double>(); }

 private:
  static bool contains_sorted(const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  }

  static Rat dot(const QMat& F, const QVec& a, const QVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < F.rows; ++i)
      for (std::size_t j = 0; j < F.cols; ++j)
        if (F.at(i, j) != 0) s += a[i] * F.at(i, j) * b[j];
    return s;
  }

  void check_chart(const ApartmentChart& c) const {
    if (!(transpose(c.w_bar) * (c.form * c.w_bar) == c.form))
      throw std::logic_error("chart element does not preserve the restricted form");
  }
};

}  // namespace alcove
