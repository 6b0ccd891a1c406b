#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "rccloop/errors.hpp"
#include "rccloop/group.hpp"
#include "rccloop/perm.hpp"

namespace rccloop {

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Smallest positive primitive root mod p.
inline int primitive_root(int p) {
  auto order_mod = [p](long long a) {
    long long x = a % p, ord = 1;
    while (x != 1) {
      x = x * a % p;
      ++ord;
    }
    return ord;
  };
  for (int g = 2; g < p; ++g)
    if (order_mod(g) == p - 1) return g;
  throw InternalError("no primitive root found");
}

namespace detail {

/// Point numbering on a block of p points: point j carries residue j+1 mod p,
/// so the 0-residue sits at point p-1.
inline int point_of_residue(int r, int p) { return (r - 1 + p) % p; }
inline int residue_of_point(int j, int p) { return (j + 1) % p; }

}  // namespace detail

/// Degree-2p scene for the wreath product C_p wr C_2: the two p-cycles, the
/// block swap, and the order-(p-1) element nu acting as multiplication by a
/// primitive root on the residues of both blocks.
struct WreathContext {
  int p = 0;
  int root = 0;  // primitive root mod p used by nu
  Permutation pi1, pi2, alpha, nu;
  std::shared_ptr<const GroupView> g_wr;  // <pi2, alpha>, order 2p^2
  std::shared_ptr<const GroupView> k;     // <pi1, pi2>, order p^2
  std::shared_ptr<const GroupView> n;     // <nu> x| G, order 2p^2(p-1)
  std::vector<int> z_g;      // <pi1 pi2> as indices into g_wr
  std::vector<int> g_prime;  // <pi1^-1 pi2> as indices into g_wr
};

inline WreathContext wreath_context(int p, int max_p = 13) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw NotOddPrime("wreath_context: p must be an odd prime");
  if (p > max_p) throw InvalidArgument("wreath_context: p exceeds bound");

  WreathContext ctx;
  ctx.p = p;
  ctx.root = primitive_root(p);
  int deg = 2 * p;

  std::vector<int> img(deg);
  for (int i = 0; i < deg; ++i) img[i] = i;
  for (int i = 0; i < p; ++i) img[i] = (i + 1) % p;
  ctx.pi1 = Permutation(img);

  for (int i = 0; i < deg; ++i) img[i] = (i + p) % deg;
  ctx.alpha = Permutation(img);

  ctx.pi2 = ctx.pi1.conjugated_by(ctx.alpha);

  for (int i = 0; i < deg; ++i) img[i] = i;
  for (int block = 0; block < 2; ++block) {
    int base = block * p;
    for (int j = 0; j < p; ++j) {
      int r = detail::residue_of_point(j, p);
      img[base + j] = base + detail::point_of_residue(r * ctx.root % p, p);
    }
  }
  ctx.nu = Permutation(img);

  ctx.g_wr = std::make_shared<GroupView>(closure({ctx.pi2, ctx.alpha}));
  ctx.k = std::make_shared<GroupView>(closure({ctx.pi1, ctx.pi2}));
  ctx.n = std::make_shared<GroupView>(closure({ctx.nu, ctx.pi2, ctx.alpha}));
  if (ctx.g_wr->order() != 2LL * p * p || ctx.k->order() != 1LL * p * p ||
      ctx.n->order() != 2LL * p * p * (p - 1))
    throw InternalError("wreath_context: unexpected group order");

  Permutation z = ctx.pi1 * ctx.pi2;
  Permutation gp = ctx.pi1.inverse() * ctx.pi2;
  for (int e = 0; e < p; ++e) {
    ctx.z_g.push_back(ctx.g_wr->index_of(z.power(e)));
    ctx.g_prime.push_back(ctx.g_wr->index_of(gp.power(e)));
  }
  std::sort(ctx.z_g.begin(), ctx.z_g.end());
  std::sort(ctx.g_prime.begin(), ctx.g_prime.end());
  return ctx;
}

/// Degree-2p scene for the affine normalizer A x <alpha>: A = <nu, pi1 pi2>
/// preserves the two blocks, alpha swaps them.
struct AffineContext {
  int p = 0;
  int r = 0;   // odd part of p-1
  int n2 = 0;  // 2-adic valuation of p-1
  Permutation p_gen;  // pi1 pi2
  Permutation nu, alpha;
  std::shared_ptr<const GroupView> a;      // <nu, p_gen>, order p(p-1)
  std::shared_ptr<const GroupView> n_aff;  // A x <alpha>, order 2p(p-1)
};

inline AffineContext affine_context(int p, int max_p = 13) {
  WreathContext w = wreath_context(p, max_p);
  AffineContext ctx;
  ctx.p = p;
  int m = p - 1;
  ctx.n2 = 0;
  while (m % 2 == 0) {
    m /= 2;
    ++ctx.n2;
  }
  ctx.r = m;
  ctx.p_gen = w.pi1 * w.pi2;
  ctx.nu = w.nu;
  ctx.alpha = w.alpha;
  ctx.a = std::make_shared<GroupView>(closure({ctx.nu, ctx.p_gen}));
  ctx.n_aff =
      std::make_shared<GroupView>(closure({ctx.nu, ctx.p_gen, ctx.alpha}));
  if (ctx.a->order() != 1LL * p * (p - 1) ||
      ctx.n_aff->order() != 2LL * p * (p - 1))
    throw InternalError("affine_context: unexpected group order");
  return ctx;
}

/// True when the permutation maps {0..p-1} onto itself.
inline bool preserves_blocks(const Permutation& g, int p) {
  for (int i = 0; i < p; ++i)
    if (g(i) >= p) return false;
  return true;
}

/// True when the permutation maps {0..p-1} onto {p..2p-1} and back.
inline bool swaps_blocks(const Permutation& g, int p) {
  for (int i = 0; i < p; ++i)
    if (g(i) < p) return false;
  for (int i = p; i < 2 * p; ++i)
    if (g(i) >= p) return false;
  return true;
}

}  // namespace rccloop
