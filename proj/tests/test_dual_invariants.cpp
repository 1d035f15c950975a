#include "alcove/dual_invariants.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

using namespace alcove;

namespace {

const std::string kTables = std::string(ALCOVE_SOURCE_DIR) + "/data/tables";

PairDatum sl2_trivial() {
  PairDatum p;
  p.side = "chi";
  p.group = "SL2";
  p.index = 0;
  p.rank = 1;
  p.generators = {{{-1}}};
  p.order = 2;
  return p;
}

PairDatum sl2_sign() {
  PairDatum p;
  p.side = "chi";
  p.group = "SL2";
  p.index = 1;
  p.rank = 0;
  p.order = 1;
  return p;
}

PairDatum a2_torus() {
  PairDatum p;
  p.side = "chi";
  p.group = "SL3";
  p.index = 0;
  p.rank = 2;
  p.generators = {{{-1, 1}, {0, 1}}, {{1, 0}, {1, -1}}};
  p.order = 6;
  return p;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "alcove_" + name + ".tbl";
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("group closure validation", "[dual]") {
  CHECK(group_elements(sl2_trivial()).size() == 2);
  CHECK(group_elements(sl2_sign()).size() == 1);
  CHECK(group_elements(a2_torus()).size() == 6);

  // a shear generates an infinite group: the closure passes the ceiling
  PairDatum shear = sl2_trivial();
  shear.rank = 2;
  shear.generators = {{{1, 1}, {0, 1}}};
  shear.order = 4;
  CHECK_THROWS_AS(group_elements(shear), std::invalid_argument);

  // stated order must be exact
  PairDatum wrong = sl2_trivial();
  wrong.order = 3;
  CHECK_THROWS_AS(group_elements(wrong), std::invalid_argument);

  // generators must be unimodular
  PairDatum fat = sl2_trivial();
  fat.generators = {{{2}}};
  CHECK_THROWS_AS(group_elements(fat), std::invalid_argument);

  PairDatum side = sl2_trivial();
  side.side = "left";
  CHECK_THROWS_AS(validate_pair(side), std::invalid_argument);
}

TEST_CASE("orbit series oracles", "[dual]") {
  // rank one, {+-1}: (2k+1)^2 + 1 fixed pairs, halved
  auto s = orbit_series(sl2_trivial(), 3);
  CHECK(s.counts == std::vector<long long>{1, 5, 13, 25});
  CHECK(s.exterior == std::vector<long long>{1, 0});
  CHECK(s.region.box);

  auto s0 = orbit_series(sl2_sign(), 3);
  CHECK(s0.counts == std::vector<long long>{1, 1, 1, 1});
  CHECK(s0.exterior == std::vector<long long>{1});

  // the symmetric group on the sum-zero plane is not a signed permutation
  // action: the hexagonal form takes over, with 7 points at radius one
  auto a2 = orbit_series(a2_torus(), 1);
  CHECK_FALSE(a2.region.box);
  CHECK(a2.region.form == LMat{{8, -4}, {-4, 8}});
  CHECK(a2.region.unit == 8);
  CHECK(region_points(a2.region, 2, 1).size() == 7);
  CHECK(a2.counts == std::vector<long long>{1, 9});
  CHECK(a2.exterior == std::vector<long long>{1, 0, 0});
}

TEST_CASE("averaged and direct orbit counts agree", "[dual]") {
  auto table = load_table_dir(kTables);
  REQUIRE_FALSE(table.empty());
  for (auto& p : table) {
    if (p.rank > 2) continue;
    auto s = orbit_series(p, 3);
    for (long long k = 0; k <= 3; ++k) {
      INFO(record_name(p) << " at radius " << k);
      CHECK(s.counts[k] == orbit_count_direct(p, k));
    }
  }
}

TEST_CASE("regions are stable and series monotone", "[dual]") {
  auto table = load_table_dir(kTables);
  for (auto& p : table) {
    auto elements = group_elements(p);
    auto region = counting_region(p, elements);
    auto pts = region_points(region, p.rank, 2);
    std::set<std::vector<long long>> inside(pts.begin(), pts.end());
    for (auto& g : elements)
      for (auto& x : pts) CHECK(inside.count(detail::lmat_apply(g, x)));

    auto s = orbit_series(p, 3);
    CHECK(s.exterior[0] == 1);
    for (std::size_t k = 1; k < s.counts.size(); ++k)
      CHECK(s.counts[k] >= s.counts[k - 1]);

    // alternating exterior sum equals the averaged det(1 - g)
    long long alt = 0;
    for (std::size_t j = 0; j < s.exterior.size(); ++j)
      alt += (j % 2 == 0 ? 1 : -1) * s.exterior[j];
    long long avg = 0;
    for (auto& g : elements) {
      LMat one_minus(p.rank, std::vector<long long>(p.rank, 0));
      for (std::size_t i = 0; i < p.rank; ++i)
        for (std::size_t j = 0; j < p.rank; ++j)
          one_minus[i][j] = (i == j ? 1 : 0) - g[i][j];
      avg += detail::lmat_det(one_minus);
    }
    REQUIRE(avg % (long long)elements.size() == 0);
    CHECK(alt == avg / (long long)elements.size());
  }
}

TEST_CASE("table files load and validate", "[dual]") {
  auto one = load_pair_tables(kTables + "/sl2_pgl2.tbl");
  REQUIRE(one.size() == 4);
  CHECK(one[0].side == "chi");
  CHECK(one[0].group == "SL2");
  CHECK(one[0].rank == 1);
  CHECK(one[0].order == 2);
  CHECK(one[3].side == "c");
  CHECK(one[3].rank == 0);

  auto all = load_table_dir(kTables);
  CHECK(all.size() == 24);
  std::map<std::string, int> per_group;
  for (auto& p : all) ++per_group[p.group];
  CHECK(per_group == std::map<std::string, int>{{"G2", 2},
                                                {"PGL2", 2},
                                                {"PGL3", 3},
                                                {"PGL4", 4},
                                                {"SL2", 2},
                                                {"SL3", 3},
                                                {"SL4", 4},
                                                {"SO5", 2},
                                                {"Sp4", 2}});

  auto empty_path = write_temp("empty", "# nothing here\n\n");
  CHECK(load_pair_tables(empty_path).empty());
  std::remove(empty_path.c_str());

  auto bad_path = write_temp("bad", "record chi SL2 0 1\n");
  CHECK_THROWS_AS(load_pair_tables(bad_path), std::runtime_error);
  std::remove(bad_path.c_str());

  auto loose_path = write_temp("loose", "gen -1\n");
  CHECK_THROWS_AS(load_pair_tables(loose_path), std::runtime_error);
  std::remove(loose_path.c_str());

  auto infinite_path =
      write_temp("infinite", "record chi X 0 2 4\ngen 1 1 0 1\n");
  CHECK_THROWS_AS(load_pair_tables(infinite_path), std::runtime_error);
  std::remove(infinite_path.c_str());

  CHECK_THROWS_AS(load_pair_tables(kTables + "/absent.tbl"), std::runtime_error);
}

TEST_CASE("the two sides match record by record", "[dual]") {
  auto all = load_table_dir(kTables);
  std::vector<PairDatum> chi, c;
  for (auto& p : all) (p.side == "chi" ? chi : c).push_back(p);
  REQUIRE(chi.size() == 12);
  REQUIRE(c.size() == 12);

  auto m = match_tables(chi, c, 3);
  INFO((m.problems.empty() ? "" : m.problems[0]));
  CHECK(m.ok);
  CHECK(m.pairs.size() == 12);
  CHECK(m.chi_halfdim_sum == m.c_halfdim_sum);

  // matching a table against itself is the identity
  auto self = match_tables(chi, chi, 3);
  REQUIRE(self.ok);
  for (std::size_t i = 0; i < self.pairs.size(); ++i) {
    CHECK(self.pairs[i].first == i);
    CHECK(self.pairs[i].second == i);
  }

  // dropping a record is reported, not thrown
  std::vector<PairDatum> short_c(c.begin(), c.end() - 1);
  auto broken = match_tables(chi, short_c, 1);
  CHECK_FALSE(broken.ok);
  bool named = false;
  for (auto& pr : broken.problems)
    if (pr.find("unmatched record") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("endomorphism fingerprints", "[dual]") {
  auto fp = endomorphism_fingerprint({sl2_trivial()}, 1);
  REQUIRE(fp.size() == 1);
  CHECK(fp[0].counts == std::vector<long long>{1, 5});
  CHECK(fp[0].exterior == std::vector<long long>{1, 0});
  CHECK(fp[0].graded ==
        std::vector<std::vector<long long>>{{1, 0}, {5, 4}});

  auto sign = endomorphism_fingerprint({sl2_sign()}, 1);
  REQUIRE(sign.size() == 1);
  CHECK(sign[0].counts == std::vector<long long>{1, 1});
  CHECK(sign[0].exterior == std::vector<long long>{1});
  CHECK(sign[0].graded == std::vector<std::vector<long long>>{{1}, {1}});

  CHECK(endomorphism_fingerprint({}, 2).empty());
}
