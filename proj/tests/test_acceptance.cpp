#include "alcove/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>

using namespace alcove;

// One line per criterion so a failing run names the broken area directly.
TEST_CASE("every acceptance criterion passes") {
  VerifyOptions opt;
  opt.tables_dir = std::string(ALCOVE_SOURCE_DIR) + "/data/tables";
  auto results = run_verification(opt);
  REQUIRE(results.size() == 12);
  for (auto& r : results) {
    std::printf("%s  %-14s %s\n", r.pass ? "pass" : "FAIL", r.slug.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    INFO(r.slug << ": " << r.detail);
    CHECK(r.pass);
  }
}
