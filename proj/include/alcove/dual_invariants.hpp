#pragma once

// Tabulated pairs of finite reflection-group actions on cocharacter lattices,
// one table side per construction, with orbit-counting invariants used to
// match the two sides record by record.

#include "alcove/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alcove {

// Integer matrices here are tiny (rank <= 4), stored row-major.
using LMat = std::vector<std::vector<long long>>;

struct PairDatum {
  std::string side;   // "chi" or "c"
  std::string group;  // isogeny label, e.g. "SL2"
  long long index = 0;
  std::size_t rank = 0;
  std::vector<LMat> generators;  // rank x rank, acting on column vectors
  std::size_t order = 1;         // order of the generated group
};

namespace detail {

inline LMat lmat_identity(std::size_t r) {
  LMat m(r, std::vector<long long>(r, 0));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = 1;
  return m;
}

inline LMat lmat_mul(const LMat& a, const LMat& b) {
  std::size_t r = a.size();
  LMat c(r, std::vector<long long>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < r; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::vector<long long> lmat_apply(const LMat& m,
                                         const std::vector<long long>& x) {
  std::vector<long long> y(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

inline long long lmat_det(const LMat& m) {
  std::size_t r = m.size();
  if (r == 0) return 1;
  if (r == 1) return m[0][0];
  long long out = 0;
  for (std::size_t c = 0; c < r; ++c) {
    if (!m[0][c]) continue;
    LMat minor;
    for (std::size_t i = 1; i < r; ++i) {
      std::vector<long long> row;
      for (std::size_t j = 0; j < r; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    long long term = m[0][c] * lmat_det(minor);
    out += (c % 2 == 0) ? term : -term;
  }
  return out;
}

// Sum of the j x j principal minors, the coefficient of t^j in det(1 + t m).
inline long long principal_minor_sum(const LMat& m, std::size_t j) {
  std::size_t r = m.size();
  if (j == 0) return 1;
  long long out = 0;
  std::vector<std::size_t> pick(j);
  for (std::size_t i = 0; i < j; ++i) pick[i] = i;
  while (true) {
    LMat sub(j, std::vector<long long>(j));
    for (std::size_t a = 0; a < j; ++a)
      for (std::size_t b = 0; b < j; ++b) sub[a][b] = m[pick[a]][pick[b]];
    out += lmat_det(sub);
    std::size_t i = j;
    while (i > 0 && pick[i - 1] == r - j + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t t = i; t < j; ++t) pick[t] = pick[t - 1] + 1;
  }
  return out;
}

inline bool is_signed_permutation(const LMat& m) {
  std::size_t r = m.size();
  std::vector<int> col_hits(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    int row_hits = 0;
    for (std::size_t j = 0; j < r; ++j) {
      if (!m[i][j]) continue;
      if (m[i][j] != 1 && m[i][j] != -1) return false;
      ++row_hits;
      ++col_hits[j];
    }
    if (row_hits != 1) return false;
  }
  for (std::size_t j = 0; j < r; ++j)
    if (col_hits[j] != 1) return false;
  return true;
}

// floor(sqrt(num / den)) for nonnegative num, positive den.
inline long long floor_sqrt_ratio(long long num, long long den) {
  long long b = (long long)std::sqrt((double)num / (double)den);
  while ((b + 1) * (b + 1) * den <= num) ++b;
  while (b > 0 && b * b * den > num) --b;
  return b;
}

}  // namespace detail

// The group generated by the record's matrices, identity first. Throws if the
// closure does not finish at exactly the stated order.
inline std::vector<LMat> group_elements(const PairDatum& p) {
  for (auto& g : p.generators) {
    if (g.size() != p.rank) throw std::invalid_argument("generator rank mismatch");
    for (auto& row : g)
      if (row.size() != p.rank)
        throw std::invalid_argument("generator rank mismatch");
    long long d = detail::lmat_det(g);
    if (d != 1 && d != -1)
      throw std::invalid_argument("generator is not invertible over the integers");
  }
  if (p.order == 0) throw std::invalid_argument("group order must be positive");
  std::set<LMat> seen{detail::lmat_identity(p.rank)};
  std::vector<LMat> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<LMat> next;
    for (auto& a : frontier)
      for (auto& g : p.generators) {
        LMat b = detail::lmat_mul(g, a);
        if (seen.insert(b).second) {
          if (seen.size() > p.order)
            throw std::invalid_argument(
                "group closure exceeds the stated order " + std::to_string(p.order));
          next.push_back(std::move(b));
        }
      }
    frontier = std::move(next);
  }
  if (seen.size() != p.order)
    throw std::invalid_argument("group order is " + std::to_string(seen.size()) +
                                ", not the stated " + std::to_string(p.order));
  return std::vector<LMat>(seen.begin(), seen.end());
}

inline void validate_pair(const PairDatum& p) {
  if (p.side != "chi" && p.side != "c")
    throw std::invalid_argument("side must be chi or c");
  group_elements(p);
}

// Counting region for a record: the sup-norm box when every group element is
// a signed permutation, otherwise the ball of the invariant form Q = sum of
// g^T g, scaled so that radius k admits exactly the lattice minima at k = 1.
struct CountingRegion {
  bool box = true;
  LMat form;            // only when !box
  long long unit = 1;   // minimal nonzero value of the form
};

inline CountingRegion counting_region(const PairDatum& p,
                                      const std::vector<LMat>& elements) {
  CountingRegion region;
  for (auto& g : elements)
    if (!detail::is_signed_permutation(g)) {
      region.box = false;
      break;
    }
  if (region.box || p.rank == 0) return region;

  std::size_t r = p.rank;
  region.form.assign(r, std::vector<long long>(r, 0));
  for (auto& g : elements)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k)
          region.form[i][j] += g[k][i] * g[k][j];

  // minimal nonzero value: scan the box that must contain any minimizer
  long long det = detail::lmat_det(region.form);
  long long min_diag = region.form[0][0];
  for (std::size_t i = 1; i < r; ++i) min_diag = std::min(min_diag, region.form[i][i]);
  std::vector<long long> bound(r);
  for (std::size_t i = 0; i < r; ++i) {
    LMat minor;
    for (std::size_t a = 0; a < r; ++a) {
      if (a == i) continue;
      std::vector<long long> row;
      for (std::size_t b = 0; b < r; ++b)
        if (b != i) row.push_back(region.form[a][b]);
      minor.push_back(std::move(row));
    }
    bound[i] = detail::floor_sqrt_ratio(min_diag * detail::lmat_det(minor), det);
  }
  long long best = min_diag;
  std::vector<long long> x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = -bound[i];
  while (true) {
    long long v = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) v += x[i] * region.form[i][j] * x[j];
    if (v > 0 && v < best) best = v;
    std::size_t i = r;
    while (i > 0 && x[i - 1] == bound[i - 1]) {
      x[i - 1] = -bound[i - 1];
      --i;
    }
    if (i == 0) break;
    ++x[i - 1];
  }
  region.unit = best;
  return region;
}

// All lattice points of the region at radius k, in lexicographic order.
inline std::vector<std::vector<long long>> region_points(const CountingRegion& region,
                                                         std::size_t rank,
                                                         long long k) {
  if (k < 0) throw std::invalid_argument("radius must be nonnegative");
  std::vector<std::vector<long long>> out;
  if (rank == 0) {
    out.push_back({});
    return out;
  }
  std::vector<long long> bound(rank, k);
  if (!region.box) {
    long long det = detail::lmat_det(region.form);
    for (std::size_t i = 0; i < rank; ++i) {
      LMat minor;
      for (std::size_t a = 0; a < rank; ++a) {
        if (a == i) continue;
        std::vector<long long> row;
        for (std::size_t b = 0; b < rank; ++b)
          if (b != i) row.push_back(region.form[a][b]);
        minor.push_back(std::move(row));
      }
      bound[i] = detail::floor_sqrt_ratio(k * k * region.unit * detail::lmat_det(minor), det);
    }
  }
  std::vector<long long> x(rank);
  for (std::size_t i = 0; i < rank; ++i) x[i] = -bound[i];
  while (true) {
    bool keep = true;
    if (!region.box) {
      long long v = 0;
      for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j) v += x[i] * region.form[i][j] * x[j];
      keep = v <= k * k * region.unit;
    }
    if (keep) out.push_back(x);
    std::size_t i = rank;
    while (i > 0 && x[i - 1] == bound[i - 1]) {
      x[i - 1] = -bound[i - 1];
      --i;
    }
    if (i == 0) break;
    ++x[i - 1];
  }
  return out;
}

struct OrbitSeries {
  std::vector<long long> counts;    // diagonal orbit counts at radii 0..R
  std::vector<long long> exterior;  // invariant dimensions in degrees 0..rank
  CountingRegion region;
};

// Orbit counts on pairs of lattice points by the averaging formula, plus the
// exterior-power invariant dimensions.
inline OrbitSeries orbit_series(const PairDatum& p, long long R) {
  if (R < 0) throw std::invalid_argument("radius bound must be nonnegative");
  auto elements = group_elements(p);
  OrbitSeries out;
  out.region = counting_region(p, elements);
  long long n = (long long)elements.size();

  for (std::size_t j = 0; j <= p.rank; ++j) {
    long long total = 0;
    for (auto& g : elements) total += detail::principal_minor_sum(g, j);
    if (total % n != 0) throw std::logic_error("exterior average is not integral");
    out.exterior.push_back(total / n);
  }

  for (long long k = 0; k <= R; ++k) {
    auto pts = region_points(out.region, p.rank, k);
    long long total = 0;
    for (auto& g : elements) {
      long long fixed = 0;
      for (auto& x : pts)
        if (detail::lmat_apply(g, x) == x) ++fixed;
      total += fixed * fixed;
    }
    if (total % n != 0) throw std::logic_error("orbit average is not integral");
    out.counts.push_back(total / n);
  }
  return out;
}

// Direct count of diagonal orbits at radius k by merging, for cross-checks.
inline long long orbit_count_direct(const PairDatum& p, long long k) {
  auto elements = group_elements(p);
  auto region = counting_region(p, elements);
  auto pts = region_points(region, p.rank, k);
  std::map<std::vector<long long>, std::size_t> id;
  for (std::size_t i = 0; i < pts.size(); ++i) id[pts[i]] = i;
  std::size_t n = pts.size() * pts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (auto& g : p.generators)
    for (std::size_t xi = 0; xi < pts.size(); ++xi) {
      auto gx = id.find(detail::lmat_apply(g, pts[xi]));
      if (gx == id.end()) throw std::logic_error("region is not stable");
      for (std::size_t yi = 0; yi < pts.size(); ++yi) {
        auto gy = id.find(detail::lmat_apply(g, pts[yi]));
        if (gy == id.end()) throw std::logic_error("region is not stable");
        std::size_t a = find(xi * pts.size() + yi);
        std::size_t b = find(gx->second * pts.size() + gy->second);
        if (a != b) parent[a] = b;
      }
    }
  long long orbits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++orbits;
  return orbits;
}

// --- table files --------------------------------------------------------------

// One record per line group:
//   record <side> <group> <index> <rank> <order>
//   gen <rank*rank integers, row-major>   (one line per generator)
// Comments run from '#' to the end of the line.
inline std::vector<PairDatum> load_pair_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read table file " + path);
  std::vector<PairDatum> out;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream row(line);
    std::string kind;
    if (!(row >> kind)) continue;
    if (kind == "record") {
      PairDatum p;
      long long rank = -1, order = -1;
      if (!(row >> p.side >> p.group >> p.index >> rank >> order))
        fail("record needs side, group, index, rank, order");
      std::string extra;
      if (row >> extra) fail("trailing field " + extra);
      if (rank < 0 || order < 1) fail("rank or order out of range");
      p.rank = (std::size_t)rank;
      p.order = (std::size_t)order;
      out.push_back(std::move(p));
    } else if (kind == "gen") {
      if (out.empty()) fail("generator before any record");
      std::size_t r = out.back().rank;
      LMat m(r, std::vector<long long>(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          if (!(row >> m[i][j])) fail("generator needs rank*rank integers");
      std::string extra;
      if (row >> extra) fail("trailing field " + extra);
      out.back().generators.push_back(std::move(m));
    } else {
      fail("unknown keyword " + kind);
    }
  }
  for (auto& p : out) {
    try {
      validate_pair(p);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ": record " + p.side + " " + p.group + " " +
                               std::to_string(p.index) + ": " + e.what());
    }
  }
  return out;
}

// Loads every .tbl file under dir, in name order.
inline std::vector<PairDatum> load_table_dir(const std::string& dir) {
  std::vector<std::string> files;
  std::error_code ec;
  for (auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.path().extension() == ".tbl") files.push_back(entry.path().string());
  if (ec) throw std::runtime_error("cannot read table directory " + dir);
  std::sort(files.begin(), files.end());
  std::vector<PairDatum> out;
  for (auto& f : files) {
    auto part = load_pair_tables(f);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline std::string record_name(const PairDatum& p) {
  return p.side + " " + p.group + " " + std::to_string(p.index);
}

// --- matching the two sides ----------------------------------------------------

struct MatchOutcome {
  bool ok = false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // chi index, c index
  std::vector<std::string> problems;
  long long chi_halfdim_sum = 0;  // sum of 2 * rank over the chi side
  long long c_halfdim_sum = 0;
};

// Pairs up records with equal rank, group order, orbit counts through R and
// exterior invariants. Failures are reported, never thrown.
inline MatchOutcome match_tables(const std::vector<PairDatum>& chi,
                                 const std::vector<PairDatum>& c, long long R) {
  MatchOutcome out;
  for (auto& p : chi) out.chi_halfdim_sum += 2 * (long long)p.rank;
  for (auto& p : c) out.c_halfdim_sum += 2 * (long long)p.rank;
  if (out.chi_halfdim_sum != out.c_halfdim_sum)
    out.problems.push_back("dimension sums differ: " +
                           std::to_string(out.chi_halfdim_sum) + " vs " +
                           std::to_string(out.c_halfdim_sum));
  if (chi.size() != c.size())
    out.problems.push_back("record counts differ: " + std::to_string(chi.size()) +
                           " vs " + std::to_string(c.size()));

  using Key = std::tuple<std::size_t, std::size_t, std::vector<long long>,
                         std::vector<long long>>;
  auto key_of = [&](const PairDatum& p) {
    auto s = orbit_series(p, R);
    return Key{p.rank, p.order, s.counts, s.exterior};
  };
  std::vector<Key> ckeys;
  for (auto& p : c) ckeys.push_back(key_of(p));
  std::vector<char> taken(c.size(), 0);
  for (std::size_t i = 0; i < chi.size(); ++i) {
    Key k = key_of(chi[i]);
    bool found = false;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (taken[j] || !(ckeys[j] == k)) continue;
      taken[j] = 1;
      out.pairs.push_back({i, j});
      found = true;
      break;
    }
    if (!found) out.problems.push_back("unmatched record " + record_name(chi[i]));
  }
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!taken[j]) out.problems.push_back("unmatched record " + record_name(c[j]));
  out.ok = out.problems.empty();
  return out;
}

// --- endomorphism fingerprints ---------------------------------------------------

struct Fingerprint {
  std::string name;                  // side, group and index of the record
  std::vector<long long> counts;     // orbit counts at radii 0..R
  std::vector<long long> exterior;   // invariant dimensions 0..rank
  std::vector<std::vector<long long>> graded;  // graded[k][j], radii x degrees
};

// For each record: the orbit counts, the exterior invariants, and the graded
// average d[k][j] over the group of (fixed points at radius k)^2 times the
// degree-j coefficient of det(1 + t g).
inline std::vector<Fingerprint> endomorphism_fingerprint(
    const std::vector<PairDatum>& table, long long R) {
  std::vector<Fingerprint> out;
  for (auto& p : table) {
    auto elements = group_elements(p);
    auto series = orbit_series(p, R);
    Fingerprint f;
    f.name = record_name(p);
    f.counts = series.counts;
    f.exterior = series.exterior;
    long long n = (long long)elements.size();
    for (long long k = 0; k <= R; ++k) {
      auto pts = region_points(series.region, p.rank, k);
      std::vector<long long> fixed;
      for (auto& g : elements) {
        long long cnt = 0;
        for (auto& x : pts)
          if (detail::lmat_apply(g, x) == x) ++cnt;
        fixed.push_back(cnt);
      }
      std::vector<long long> row;
      for (std::size_t j = 0; j <= p.rank; ++j) {
        long long total = 0;
        for (std::size_t gi = 0; gi < elements.size(); ++gi)
          total += fixed[gi] * fixed[gi] *
                   detail::principal_minor_sum(elements[gi], j);
        if (total % n != 0) throw std::logic_error("graded average is not integral");
        row.push_back(total / n);
      }
      f.graded.push_back(std::move(row));
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace alcove
