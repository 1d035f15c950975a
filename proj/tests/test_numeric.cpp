#include "alcove/numeric.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace alcove;

namespace {

QMat mat(std::size_t r, std::size_t c, std::vector<long long> v) {
  QMat m(r, c);
  for (std::size_t i = 0; i < v.size(); ++i) m.a[i] = v[i];
  return m;
}

}  // namespace

TEST_CASE("rref and rank") {
  QMat m = mat(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(rank(m) == 2);
  CHECK(rank(QMat::identity(4)) == 4);
  CHECK(rank(QMat(2, 2)) == 0);
}

TEST_CASE("determinant and inverse") {
  QMat m = mat(2, 2, {2, -1, -1, 2});
  CHECK(determinant(m) == 3);
  auto inv = inverse(m);
  REQUIRE(inv.has_value());
  CHECK((*inv) * m == QMat::identity(2));
  CHECK(m * (*inv) == QMat::identity(2));
  CHECK(!inverse(mat(2, 2, {1, 2, 2, 4})).has_value());
  CHECK(determinant(mat(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9})) == 0);
}

TEST_CASE("solve") {
  QMat A = mat(2, 2, {2, 1, 1, 3});
  QVec b{Rat(5), Rat(10)};
  auto x = solve(A, b);
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 1);
  CHECK((*x)[1] == 3);
  // inconsistent system
  QMat B = mat(2, 1, {1, 1});
  CHECK(!solve(B, QVec{Rat(0), Rat(1)}).has_value());
  // underdetermined but consistent: any solution is fine
  QMat C = mat(1, 2, {1, 1});
  auto y = solve(C, QVec{Rat(4)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] + (*y)[1] == 4);
}

TEST_CASE("nullspace") {
  QMat m = mat(2, 3, {1, 1, 0, 0, 1, 1});
  auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  for (std::size_t i = 0; i < 2; ++i) {
    Rat s(0);
    for (std::size_t j = 0; j < 3; ++j) s += m.at(i, j) * ns[0][j];
    CHECK(s == 0);
  }
  CHECK(nullspace(QMat::identity(3)).empty());
}

TEST_CASE("affine subspaces canonicalize") {
  // same line through (1,0) with direction (1,1), two presentations
  auto s1 = AffineSubspace::make(QVec{Rat(1), Rat(0)}, {QVec{Rat(1), Rat(1)}});
  auto s2 = AffineSubspace::make(QVec{Rat(3), Rat(2)}, {QVec{Rat(-2), Rat(-2)}});
  CHECK(s1 == s2);
  CHECK(s1.dim() == 1);
  CHECK(s1.contains_point(QVec{Rat(5), Rat(4)}));
  CHECK(!s1.contains_point(QVec{Rat(5), Rat(5)}));

  auto plane = AffineSubspace::make(
      QVec{Rat(0), Rat(0)}, {QVec{Rat(1), Rat(0)}, QVec{Rat(0), Rat(1)}});
  CHECK(plane.contains(s1));
  CHECK(!s1.contains(plane));

  auto pt = AffineSubspace::make(QVec{Rat(1), Rat(0)}, std::vector<QVec>{});
  CHECK(pt.dim() == 0);
  CHECK(s1.contains(pt));
}

TEST_CASE("rng determinism") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    long long v = c.in_range(-3, 5);
    CHECK(v >= -3);
    CHECK(v <= 5);
  }
}

TEST_CASE("rational strings") {
  CHECK(to_string(Rat(-7, 2)) == "-7/2");
  CHECK(to_string(Rat(4, 2)) == "2");
  CHECK(to_string(QVec{Rat(1), Rat(-1, 3)}) == "[1,-1/3]");
}
