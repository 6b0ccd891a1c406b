#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rccloop/contexts.hpp"
#include "rccloop/errors.hpp"

namespace rccloop {

/// Field element in the polynomial basis: coefficient sequence of length k,
/// low degree first.
using FieldElement = std::vector<int>;

/// GF(p0^k) with the lexicographically smallest monic irreducible modulus
/// (coefficients compared high degree to low, constant term last).  Results
/// that are isomorphism invariants cannot depend on this choice.
class FieldContext {
public:
  FieldContext() = default;

  explicit FieldContext(int q) {
    if (q < 2) throw NotPrimePower("field: q must be at least 2");
    int base = smallest_prime_factor(q);
    int m = q, k = 0;
    while (m > 1) {
      if (m % base != 0) throw NotPrimePower("field: q is not a prime power");
      m /= base;
      ++k;
    }
    if (q > 27) throw InvalidArgument("field: q exceeds the cap of 27");
    p0_ = base;
    k_ = k;
    q_ = q;
    choose_modulus();
  }

  int characteristic() const { return p0_; }
  int extension_degree() const { return k_; }
  int size() const { return q_; }

  /// Modulus coefficients, low degree first, length k+1, leading 1.
  const std::vector<int>& modulus() const { return modulus_; }

  FieldElement zero() const { return FieldElement(k_, 0); }
  FieldElement one() const {
    FieldElement e(k_, 0);
    e[0] = 1;
    return e;
  }

  /// Elements enumerate as base-p0 digit strings, low digit first.
  FieldElement element(int index) const {
    FieldElement e(k_);
    for (int i = 0; i < k_; ++i) {
      e[i] = index % p0_;
      index /= p0_;
    }
    return e;
  }

  int index_of(const FieldElement& e) const {
    int idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * p0_ + e[i];
    return idx;
  }

  bool is_zero(const FieldElement& e) const {
    for (int c : e)
      if (c) return false;
    return true;
  }

  FieldElement add(const FieldElement& a, const FieldElement& b) const {
    FieldElement r(k_);
    for (int i = 0; i < k_; ++i) r[i] = (a[i] + b[i]) % p0_;
    return r;
  }

  FieldElement sub(const FieldElement& a, const FieldElement& b) const {
    FieldElement r(k_);
    for (int i = 0; i < k_; ++i) r[i] = (a[i] - b[i] + p0_) % p0_;
    return r;
  }

  FieldElement neg(const FieldElement& a) const { return sub(zero(), a); }

  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    std::vector<int> prod(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < k_; ++j)
        prod[i + j] = (prod[i + j] + a[i] * b[j]) % p0_;
    }
    // Reduce by the monic modulus.
    for (int d = 2 * k_ - 2; d >= k_; --d) {
      int c = prod[d];
      if (!c) continue;
      prod[d] = 0;
      for (int i = 0; i < k_; ++i)
        prod[d - k_ + i] = (prod[d - k_ + i] - c * modulus_[i] % p0_ + p0_ * p0_) % p0_;
    }
    prod.resize(k_);
    return prod;
  }

  FieldElement pow(FieldElement a, long long e) const {
    FieldElement acc = one();
    while (e > 0) {
      if (e & 1) acc = mul(acc, a);
      a = mul(a, a);
      e >>= 1;
    }
    return acc;
  }

  FieldElement inv(const FieldElement& a) const {
    if (is_zero(a)) throw InvalidArgument("field: inverse of zero");
    return pow(a, q_ - 2);
  }

private:
  static int smallest_prime_factor(int n) {
    for (int d = 2; d * d <= n; ++d)
      if (n % d == 0) return d;
    return n;
  }

  /// True when the monic polynomial (low-first coeffs, implicit leading 1)
  /// has a root in the prime field; for degrees 2 and 3 this decides
  /// reducibility.
  bool has_root(const std::vector<int>& low_coeffs) const {
    for (int x = 0; x < p0_; ++x) {
      long long v = 1;  // leading coefficient
      for (int i = k_ - 1; i >= 0; --i) v = (v * x + low_coeffs[i]) % p0_;
      if (v == 0) return true;
    }
    return false;
  }

  void choose_modulus() {
    if (k_ == 1) {
      modulus_ = {0, 1};  // x
      return;
    }
    if (k_ > 3) throw InvalidArgument("field: extension degree beyond 3");
    // Count through coefficient tuples (c_{k-1}, ..., c_0) in lexicographic
    // order; code = sum c_i * p0^i, so the high-degree digit is most
    // significant.  Keep the first irreducible candidate.
    int total = 1;
    for (int i = 0; i < k_; ++i) total *= p0_;
    for (int code = 0; code < total; ++code) {
      std::vector<int> low(k_);
      int c = code;
      for (int i = 0; i < k_; ++i) {
        low[i] = c % p0_;
        c /= p0_;
      }
      if (!has_root(low)) {
        modulus_ = low;
        modulus_.push_back(1);
        return;
      }
    }
    throw InternalError("field: no irreducible modulus found");
  }

  int p0_ = 0, k_ = 0, q_ = 0;
  std::vector<int> modulus_;  // low degree first, length k+1
};

/// 2x2 matrix over a field context, row major: [[a, b], [c, d]].
struct Matrix2 {
  std::array<FieldElement, 4> e;

  bool operator==(const Matrix2&) const = default;
};

inline Matrix2 mat_identity(const FieldContext& f) {
  return Matrix2{{f.one(), f.zero(), f.zero(), f.one()}};
}

inline Matrix2 mat_mul(const FieldContext& f, const Matrix2& x,
                       const Matrix2& y) {
  return Matrix2{{
      f.add(f.mul(x.e[0], y.e[0]), f.mul(x.e[1], y.e[2])),
      f.add(f.mul(x.e[0], y.e[1]), f.mul(x.e[1], y.e[3])),
      f.add(f.mul(x.e[2], y.e[0]), f.mul(x.e[3], y.e[2])),
      f.add(f.mul(x.e[2], y.e[1]), f.mul(x.e[3], y.e[3])),
  }};
}

inline FieldElement mat_det(const FieldContext& f, const Matrix2& m) {
  return f.sub(f.mul(m.e[0], m.e[3]), f.mul(m.e[1], m.e[2]));
}

inline Matrix2 mat_inverse(const FieldContext& f, const Matrix2& m) {
  FieldElement det = mat_det(f, m);
  FieldElement di = f.inv(det);
  return Matrix2{{f.mul(di, m.e[3]), f.mul(di, f.neg(m.e[1])),
                  f.mul(di, f.neg(m.e[2])), f.mul(di, m.e[0])}};
}

inline long long mat_order(const FieldContext& f, const Matrix2& m) {
  Matrix2 id = mat_identity(f);
  Matrix2 acc = m;
  long long ord = 1;
  long long limit = static_cast<long long>(f.size()) * f.size();
  while (!(acc == id)) {
    acc = mat_mul(f, acc, m);
    if (++ord > limit) throw InternalError("matrix order runaway");
  }
  return ord;
}

inline long long mat_key(const FieldContext& f, const Matrix2& m) {
  long long key = 0;
  for (const auto& el : m.e) key = key * f.size() + f.index_of(el);
  return key;
}

/// All invertible 2x2 matrices over GF(q) in lexicographic entry order,
/// plus a key-indexed position lookup.
struct GL2Group {
  FieldContext field;
  std::vector<Matrix2> matrices;
  std::vector<int> position;  // mat_key -> index, -1 when absent

  int index_of(const Matrix2& m) const {
    return position[mat_key(field, m)];
  }
};

inline GL2Group gl2_group(int q) {
  if (q < 3) throw QTooSmall("gl2_group: q must be at least 3");
  GL2Group g;
  g.field = FieldContext(q);
  const FieldContext& f = g.field;
  long long q4 = 1LL * q * q * q * q;
  g.position.assign(q4, -1);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          Matrix2 m{{f.element(a), f.element(b), f.element(c), f.element(d)}};
          if (f.is_zero(mat_det(f, m))) continue;
          g.position[mat_key(f, m)] = static_cast<int>(g.matrices.size());
          g.matrices.push_back(std::move(m));
        }
  long long expected = (1LL * q * q - 1) * (1LL * q * q - q);
  if (static_cast<long long>(g.matrices.size()) != expected)
    throw InternalError("gl2_group: wrong order");
  return g;
}

/// First matrix in enumeration order of multiplicative order q^2 - 1.
inline Matrix2 singer_element(const GL2Group& g) {
  long long target = 1LL * g.field.size() * g.field.size() - 1;
  for (const auto& m : g.matrices)
    if (mat_order(g.field, m) == target) return m;
  throw InternalError("no element of order q^2 - 1 found");
}

}  // namespace rccloop
