#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <utility>
#include <vector>

#include "rccloop/contexts.hpp"
#include "rccloop/errors.hpp"
#include "rccloop/perm.hpp"

namespace rccloop {

using BigInt = boost::multiprecision::cpp_int;

/// Factorial with a cache precomputed up to 64!; larger arguments are
/// computed on the fly.
inline BigInt factorial(long long n) {
  static const std::vector<BigInt> cache = [] {
    std::vector<BigInt> c(65);
    c[0] = 1;
    for (int i = 1; i <= 64; ++i) c[i] = c[i - 1] * i;
    return c;
  }();
  if (n < 0) throw InvalidArgument("factorial of a negative number");
  if (n < static_cast<long long>(cache.size())) return cache[n];
  BigInt f = cache.back();
  for (long long i = 65; i <= n; ++i) f *= i;
  return f;
}

/// Number of square-identity elements of S_n commuting with the d-th power
/// of an n-cycle.  The closed form applies after reducing d to gcd(n, d);
/// every term is an exact integer.
inline BigInt ind_count(long long n, long long d) {
  if (n < 1 || d < 1) throw InvalidArgument("ind_count: n, d must be positive");
  d = std::gcd(n, d);
  long long m = n / d;                 // cycle length of zeta^d
  long long s = (m % 2 == 0) ? 2 : 1;  // square roots of 1 in C_m
  BigInt total = 0;
  for (long long k = 0; k <= d / 2; ++k) {
    BigInt numer = factorial(d);
    for (long long i = 0; i < k; ++i) numer *= m;
    for (long long i = 0; i < d - 2 * k; ++i) numer *= s;
    BigInt denom = factorial(k) * factorial(d - 2 * k);
    denom <<= k;  // times 2^k
    if (numer % denom != 0) throw InternalError("ind_count: non-exact term");
    total += numer / denom;
  }
  return total;
}

/// Literal count over S_n of tau with tau^2 = 1 commuting with zeta^d,
/// zeta = (0 1 ... n-1).  Exhaustive; the oracle for ind_count.
inline long long ind_count_brute(int n, int d) {
  if (n > 10) throw DegreeTooLarge("ind_count_brute: n must be at most 10");
  if (n < 1 || d < 1)
    throw InvalidArgument("ind_count_brute: n, d must be positive");
  std::vector<int> zed(n);
  for (int i = 0; i < n; ++i) zed[i] = (i + d) % n;  // zeta^d

  // Recursive generation of tau with tau^2 = 1: smallest unassigned point is
  // fixed or paired with a larger one.
  long long count = 0;
  std::vector<int> tau(n, -1);
  auto commutes = [&]() {
    for (int x = 0; x < n; ++x)
      if (tau[zed[x]] != zed[tau[x]]) return false;
    return true;
  };
  auto rec = [&](auto&& self, int from) -> void {
    int i = from;
    while (i < n && tau[i] >= 0) ++i;
    if (i == n) {
      if (commutes()) ++count;
      return;
    }
    tau[i] = i;
    self(self, i + 1);
    tau[i] = -1;
    for (int j = i + 1; j < n; ++j) {
      if (tau[j] >= 0) continue;
      tau[i] = j;
      tau[j] = i;
      self(self, i + 1);
      tau[i] = tau[j] = -1;
    }
  };
  rec(rec, 0);
  return count;
}

/// Involution-or-identity permutations of degree n in lexicographic image
/// order.
inline std::vector<Permutation> square_identity_perms(int n) {
  std::vector<Permutation> out;
  std::vector<int> tau(n, -1);
  auto rec = [&](auto&& self, int from) -> void {
    int i = from;
    while (i < n && tau[i] >= 0) ++i;
    if (i == n) {
      out.push_back(Permutation(tau));
      return;
    }
    tau[i] = i;
    self(self, i + 1);
    tau[i] = -1;
    for (int j = i + 1; j < n; ++j) {
      if (tau[j] >= 0) continue;
      tau[i] = j;
      tau[j] = i;
      self(self, i + 1);
      tau[i] = tau[j] = -1;
    }
  };
  if (n == 0)
    out.push_back(Permutation(std::vector<int>{}));
  else
    rec(rec, 0);
  return out;
}

struct CountReport {
  long long p = 0;
  BigInt total, case_a, case_b, case_c;
  long long r = 0;   // odd part of p-1
  long long n2 = 0;  // 2-adic valuation of p-1
  std::vector<std::pair<long long, BigInt>> i_values;  // d -> I_{p-1,d}
  BigInt i_top;                                        // I_{p-1}
};

/// Isomorphism-type counts of the loops of order 2p, split by the shape of
/// the right multiplication group.  The orbit sum divides exactly; anything
/// else signals an implementation bug.
inline CountReport total_rcc_count(long long p) {
  if (!is_prime(p)) throw InvalidArgument("total_rcc_count: p must be prime");
  CountReport report;
  report.p = p;
  long long m = p - 1;
  report.n2 = 0;
  while (m % 2 == 0) {
    m /= 2;
    ++report.n2;
  }
  report.r = m;

  BigInt orbit_sum = 0;
  for (long long d = 1; d <= p - 1; ++d) {
    BigInt v = ind_count(p - 1, d);
    orbit_sum += v;
    report.i_values.emplace_back(d, std::move(v));
  }
  if (orbit_sum % (p - 1) != 0)
    throw NonIntegerOrbitCount("total_rcc_count: orbit sum not divisible");
  BigInt orbits = orbit_sum / (p - 1);
  report.i_top = ind_count(p - 1, p - 1);

  report.case_a = report.i_top - 1 + orbits;
  report.case_b = p - report.r - 1;
  report.case_c = report.r;
  report.total = report.case_a + report.case_b + report.case_c;
  return report;
}

}  // namespace rccloop
