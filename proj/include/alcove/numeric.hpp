#pragma once

// Exact rational linear algebra on small dense matrices.
// Everything is value-semantic; dimensions are tiny (rank <= 8).

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace alcove {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using QVec = std::vector<Rat>;
using IVec = std::vector<Int>;

inline Rat rat(long long n, long long d = 1) { return Rat(Int(n), Int(d)); }

inline QVec qvec_zero(std::size_t n) { return QVec(n, Rat(0)); }

inline QVec operator+(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVec operator-(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVec operator*(const Rat& c, const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool is_zero(const QVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Row-major rational matrix.
struct QMat {
  std::size_t rows = 0, cols = 0;
  std::vector<Rat> a;  // rows*cols entries

  QMat() = default;
  QMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rat(0)) {}
  QMat(std::size_t r, std::size_t c, std::vector<Rat> entries)
      : rows(r), cols(c), a(std::move(entries)) {
    if (a.size() != r * c) throw std::invalid_argument("entry count mismatch");
  }

  Rat& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static QMat identity(std::size_t n) {
    QMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const QMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline QMat operator*(const QMat& x, const QMat& y) {
  assert(x.cols == y.rows);
  QMat r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Rat& xv = x.at(i, k);
      if (xv == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += xv * y.at(k, j);
    }
  return r;
}

inline QVec operator*(const QMat& m, const QVec& v) {
  assert(m.cols == v.size());
  QVec r(m.rows, Rat(0));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0) r[i] += m.at(i, j) * v[j];
  return r;
}

inline QMat operator+(const QMat& x, const QMat& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  QMat r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

inline QMat operator-(const QMat& x, const QMat& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  QMat r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

inline QMat operator*(const Rat& c, const QMat& x) {
  QMat r = x;
  for (auto& v : r.a) v *= c;
  return r;
}

inline QMat transpose(const QMat& m) {
  QMat r(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
  return r;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> rref(QMat& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
    Rat inv = Rat(1) / m.at(row, col);
    for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (std::size_t j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(QMat m) { return rref(m).size(); }

inline Rat determinant(QMat m) {
  assert(m.rows == m.cols);
  Rat det(1);
  for (std::size_t col = 0, row = 0; col < m.cols; ++col, ++row) {
    std::size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) return Rat(0);
    if (sel != row) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
      det = -det;
    }
    det *= m.at(row, col);
    Rat inv = Rat(1) / m.at(row, col);
    for (std::size_t i = row + 1; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      Rat f = m.at(i, col) * inv;
      for (std::size_t j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
    }
  }
  return det;
}

inline std::optional<QMat> inverse(const QMat& m) {
  assert(m.rows == m.cols);
  std::size_t n = m.rows;
  QMat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() != n || piv.back() != n - 1) return std::nullopt;
  QMat r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
  return r;
}

// One solution of A x = b, if consistent.
inline std::optional<QVec> solve(const QMat& A, const QVec& b) {
  assert(A.rows == b.size());
  QMat aug(A.rows, A.cols + 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[i];
  }
  auto piv = rref(aug);
  for (std::size_t i = 0; i < piv.size(); ++i)
    if (piv[i] == A.cols) return std::nullopt;  // inconsistent row
  QVec x(A.cols, Rat(0));
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(i, A.cols);
  return x;
}

// Basis of the kernel of A.
inline std::vector<QVec> nullspace(QMat A) {
  auto piv = rref(A);
  std::vector<bool> is_piv(A.cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<QVec> basis;
  for (std::size_t free = 0; free < A.cols; ++free) {
    if (is_piv[free]) continue;
    QVec v(A.cols, Rat(0));
    v[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -A.at(i, free);
    basis.push_back(v);
  }
  return basis;
}

// Affine subspace, stored in canonical form: direction rows in RREF and the
// base point reduced to zero in all pivot coordinates.  Equality of canonical
// forms is equality of subspaces.
struct AffineSubspace {
  QVec base;
  QMat dirs;  // each row is a direction; rows may be 0

  static AffineSubspace make(const QVec& base, const std::vector<QVec>& dir_list) {
    QMat dirs(dir_list.size(), base.size());
    for (std::size_t i = 0; i < dir_list.size(); ++i)
      for (std::size_t j = 0; j < base.size(); ++j) dirs.at(i, j) = dir_list[i][j];
    return make(base, std::move(dirs));
  }

  static AffineSubspace make(QVec base, QMat dirs) {
    AffineSubspace s;
    auto piv = rref(dirs);
    QMat d(piv.size(), dirs.cols);
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t j = 0; j < dirs.cols; ++j) d.at(i, j) = dirs.at(i, j);
    for (std::size_t i = 0; i < piv.size(); ++i) {
      Rat c = base[piv[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < dirs.cols; ++j) base[j] -= c * d.at(i, j);
    }
    s.base = std::move(base);
    s.dirs = std::move(d);
    return s;
  }

  std::size_t ambient_dim() const { return base.size(); }
  std::size_t dim() const { return dirs.rows; }

  bool contains_point(const QVec& p) const {
    QMat A = transpose(dirs);
    return solve(A, p - base).has_value();
  }

  bool contains(const AffineSubspace& other) const {
    if (!contains_point(other.base)) return false;
    QMat A = transpose(dirs);
    for (std::size_t i = 0; i < other.dirs.rows; ++i) {
      QVec d(other.dirs.cols);
      for (std::size_t j = 0; j < other.dirs.cols; ++j) d[j] = other.dirs.at(i, j);
      if (!solve(A, d).has_value()) return false;
    }
    return true;
  }

  bool operator==(const AffineSubspace& o) const {
    return base == o.base && dirs == o.dirs;
  }

  bool operator<(const AffineSubspace& o) const {
    if (dirs.rows != o.dirs.rows) return dirs.rows < o.dirs.rows;
    if (base != o.base) return base < o.base;
    return dirs.a < o.dirs.a;
  }
};

// Does the lattice spanned by gens (integer vectors) contain target?
// Row-by-row euclidean elimination; pivots retire as a triangular basis.
inline bool integer_lattice_contains(std::vector<QVec> gens, QVec target) {
  auto as_int = [](const Rat& q) {
    if (boost::multiprecision::denominator(q) != 1)
      throw std::invalid_argument("lattice data must be integral");
    return Int(boost::multiprecision::numerator(q));
  };
  std::size_t m = target.size();
  std::vector<std::vector<Int>> g;
  for (auto& v : gens) {
    std::vector<Int> w;
    for (auto& x : v) w.push_back(as_int(x));
    g.push_back(std::move(w));
  }
  std::vector<Int> t;
  for (auto& x : target) t.push_back(as_int(x));

  std::vector<bool> retired(g.size(), false);
  for (std::size_t row = 0; row < m; ++row) {
    while (true) {
      int a = -1, b = -1;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (retired[k] || g[k][row] == 0) continue;
        if (a < 0)
          a = static_cast<int>(k);
        else {
          b = static_cast<int>(k);
          break;
        }
      }
      if (b < 0) break;
      if (abs(g[a][row]) > abs(g[b][row])) std::swap(a, b);
      Int q = g[b][row] / g[a][row];  // truncating is fine inside the loop
      for (std::size_t i = 0; i < m; ++i) g[b][i] -= q * g[a][i];
    }
    int pivot = -1;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!retired[k] && g[k][row] != 0) pivot = static_cast<int>(k);
    if (t[row] != 0) {
      if (pivot < 0) return false;
      if (t[row] % g[pivot][row] != 0) return false;
      Int q = t[row] / g[pivot][row];
      for (std::size_t i = 0; i < m; ++i) t[i] -= q * g[pivot][i];
    }
    if (pivot >= 0) retired[pivot] = true;
  }
  for (auto& x : t)
    if (x != 0) return false;
  return true;
}

// Hash support: small rationals hash by value, large ones by decimal string.
inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

inline std::size_t hash_rat(const Rat& q) {
  const Int num = boost::multiprecision::numerator(q);
  const Int den = boost::multiprecision::denominator(q);
  std::size_t seed = 0;
  auto mix_int = [&seed](const Int& v) {
    if (v >= std::numeric_limits<long long>::min() &&
        v <= std::numeric_limits<long long>::max()) {
      hash_mix(seed, std::hash<long long>{}(static_cast<long long>(v)));
    } else {
      std::ostringstream os;
      os << v;
      hash_mix(seed, std::hash<std::string>{}(os.str()));
    }
  };
  mix_int(num);
  mix_int(den);
  return seed;
}

inline std::size_t hash_qvec(const QVec& v) {
  std::size_t seed = v.size();
  for (const auto& x : v) hash_mix(seed, hash_rat(x));
  return seed;
}

inline std::string to_string(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

inline std::string to_string(const QVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + "]";
}

// Deterministic splittable RNG (splitmix64); avoids platform-dependent
// std distributions.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    return next() % n;
  }
  long long in_range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

}  // namespace alcove
