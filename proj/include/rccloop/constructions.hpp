#pragma once

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rccloop/contexts.hpp"
#include "rccloop/counting.hpp"
#include "rccloop/errors.hpp"
#include "rccloop/folder.hpp"
#include "rccloop/loop.hpp"

namespace rccloop {

/// Parameters of a wreath-type loop of order 2p: an involution tau of the
/// index set {1..p-1} (stored 0-based on p-1 points) and the exponent z of
/// the central part of t = (pi1 pi2)^z alpha.
struct CaseALabel {
  int p = 0;
  Permutation tau;
  int z_exp = 0;

  std::string text() const {
    std::ostringstream out;
    out << "a:tau=[";
    for (int i = 0; i < tau.degree(); ++i) {
      if (i) out << ',';
      out << tau(i);
    }
    out << "];z=" << z_exp;
    return out.str();
  }
};

/// Parameters of an affine-type loop: the position of a block-swapping
/// element in the affine normalizer's element table.
struct CaseBCLabel {
  int p = 0;
  int tau_index = 0;
  char case_tag = 'b';

  std::string text() const {
    std::ostringstream out;
    out << case_tag << ":tau_index=" << tau_index;
    return out.str();
  }
};

/// The negation involution j -> p-j on {1..p-1}, 0-based.
inline Permutation negation_involution(int p) {
  std::vector<int> img(p - 1);
  for (int j = 1; j <= p - 1; ++j) img[j - 1] = (p - j) - 1;
  return Permutation(img);
}

/// Multiplication by the primitive root on {1..p-1}, 0-based: the
/// (p-1)-cycle through which nu permutes the transversal parameters.
inline Permutation root_cycle(int p) {
  int g = primitive_root(p);
  std::vector<int> img(p - 1);
  for (int j = 1; j <= p - 1; ++j) img[j - 1] = (j * g % p) - 1;
  return Permutation(img);
}

/// Builds the wreath-type folder and loop for one label.  H = <pi2>,
/// T = {pi2^{tau(j)} pi1^j} + {1} + G' t.  Throws NotGenerating for the one
/// parameter choice whose transversal generates a proper subgroup.
inline std::pair<LoopFolder, LoopTable> case_a_loop(const WreathContext& ctx,
                                                    const CaseALabel& label) {
  int p = ctx.p;
  if (label.tau.degree() != p - 1 ||
      !(label.tau * label.tau).is_identity() || label.z_exp < 0 ||
      label.z_exp >= p)
    throw InvalidArgument("case_a_loop: malformed label");
  const GroupView& g = *ctx.g_wr;

  std::vector<int> subgroup;
  for (int e = 0; e < p; ++e) subgroup.push_back(g.index_of(ctx.pi2.power(e)));
  std::sort(subgroup.begin(), subgroup.end());

  std::vector<int> transversal{0};
  for (int j = 1; j <= p - 1; ++j) {
    int tj = label.tau(j - 1) + 1;
    transversal.push_back(
        g.index_of(ctx.pi2.power(tj) * ctx.pi1.power(j)));
  }
  Permutation t = (ctx.pi1 * ctx.pi2).power(label.z_exp) * ctx.alpha;
  for (int gp : ctx.g_prime)
    transversal.push_back(g.index_of(g.elements[gp] * t));
  std::sort(transversal.begin(), transversal.end());

  std::vector<Permutation> t_perms;
  for (int ti : transversal) t_perms.push_back(g.elements[ti]);
  if (closure(t_perms).order() != g.order())
    throw NotGenerating("case_a_loop: transversal generates a proper subgroup");

  FolderReport report = validate_folder(g, subgroup, transversal);
  if (!report.is_folder || !report.is_rcc || !report.is_faithful)
    throw InternalError("case_a_loop: folder validation failed");

  LoopFolder folder{ctx.g_wr, subgroup, transversal};
  LoopTable table = loop_from_folder(folder);
  return {std::move(folder), std::move(table)};
}

/// Representative label list: every involution paired with z = 1, plus one
/// involution per conjugation orbit of the root cycle paired with z = 0,
/// minus the degenerate (negation, 0) label.
inline std::vector<CaseALabel> case_a_representatives(int p) {
  if (p < 3 || !is_prime(p))
    throw NotOddPrime("case_a_representatives: p must be an odd prime");
  auto involutions = square_identity_perms(p - 1);
  Permutation zeta = root_cycle(p);
  Permutation neg = negation_involution(p);

  std::vector<CaseALabel> labels;
  for (const auto& tau : involutions) labels.push_back({p, tau, 1});

  std::unordered_set<Permutation, PermHash> seen;
  for (const auto& tau : involutions) {
    if (seen.count(tau)) continue;
    Permutation orb = tau;
    do {
      seen.insert(orb);
      orb = orb.conjugated_by(zeta);
    } while (!(orb == tau));
    if (!(tau == neg)) labels.push_back({p, tau, 0});
  }

  std::sort(labels.begin(), labels.end(),
            [](const CaseALabel& a, const CaseALabel& b) {
              if (a.tau.images() != b.tau.images())
                return a.tau.images() < b.tau.images();
              return a.z_exp < b.z_exp;
            });
  return labels;
}

/// Every (tau, z) pair except the degenerate one; the slow route that the
/// representative list is checked against.
inline std::vector<LoopTable> case_a_all_pairs(int p) {
  WreathContext ctx = wreath_context(p);
  Permutation neg = negation_involution(p);
  std::vector<LoopTable> out;
  for (const auto& tau : square_identity_perms(p - 1))
    for (int z = 0; z < p; ++z) {
      if (tau == neg && z == 0) continue;
      out.push_back(case_a_loop(ctx, {p, tau, z}).second);
    }
  return out;
}

struct BCEntry {
  CaseBCLabel label;
  LoopFolder folder;
  LoopTable table;
};

namespace detail {

/// Case tag: 'c' when a central involution splits off as a direct factor
/// with an odd-order complement, 'b' otherwise.
inline char bc_case_tag(const GroupView& g) {
  std::vector<int> z = center(g);
  bool has_central_involution = false;
  for (int i : z)
    if (g.elements[i].order() == 2) has_central_involution = true;
  if (!has_central_involution) return 'b';
  std::vector<int> odd;
  for (int i = 0; i < g.order(); ++i)
    if (g.elements[i].order() % 2 == 1) odd.push_back(i);
  if (static_cast<long long>(odd.size()) * 2 != g.order()) return 'b';
  if (!is_subgroup(g, odd)) return 'b';
  return 'c';
}

}  // namespace detail

/// Search over block-swapping elements of the affine normalizer.  For each
/// candidate tau, G = <pi1 pi2, tau> with T = <pi1 pi2> + tau^G (T = G when
/// the action is regular, covering the two groups of order 2p).  Valid
/// folders are kept up to isomorphism; the counts must match the closed
/// formulas.
inline std::vector<BCEntry> case_bc_search(int p) {
  AffineContext ctx = affine_context(p);
  const GroupView& n_aff = *ctx.n_aff;

  std::vector<BCEntry> kept;
  for (int ti = 0; ti < n_aff.order(); ++ti) {
    const Permutation& tau = n_aff.elements[ti];
    if (!swaps_blocks(tau, p)) continue;

    auto view = std::make_shared<GroupView>(closure({ctx.p_gen, tau}));
    const GroupView& g = *view;
    if (!is_transitive(g)) continue;

    std::vector<int> subgroup;
    for (int i = 0; i < g.order(); ++i)
      if (g.elements[i](0) == 0) subgroup.push_back(i);
    if (core_of(g, subgroup).size() != 1) continue;

    std::vector<int> transversal;
    if (g.order() == 2LL * p) {
      transversal.resize(g.order());
      std::iota(transversal.begin(), transversal.end(), 0);
    } else {
      for (int e = 0; e < p; ++e)
        transversal.push_back(g.index_of(ctx.p_gen.power(e)));
      int tau_idx = g.index_of(tau);
      std::vector<int> cls{tau_idx};
      std::vector<char> in_cls(g.elements.size(), 0);
      in_cls[tau_idx] = 1;
      for (std::size_t head = 0; head < cls.size(); ++head)
        for (const auto& gen : g.generators) {
          int c = g.conj(cls[head], g.index_of(gen));
          if (!in_cls[c]) {
            in_cls[c] = 1;
            cls.push_back(c);
          }
        }
      transversal.insert(transversal.end(), cls.begin(), cls.end());
      std::sort(transversal.begin(), transversal.end());
      transversal.erase(
          std::unique(transversal.begin(), transversal.end()),
          transversal.end());
    }

    FolderReport report;
    try {
      report = validate_folder(g, subgroup, transversal);
    } catch (const NotASubgroup&) {
      continue;
    }
    if (!report.is_folder || !report.is_rcc || !report.is_faithful) continue;
    if (subgroup_closure_indices(g, transversal).size() !=
        static_cast<std::size_t>(g.order()))
      continue;

    LoopFolder folder{view, subgroup, transversal};
    LoopTable table = loop_from_folder(folder);
    bool duplicate = false;
    for (const auto& entry : kept)
      if (are_isomorphic(entry.table, table)) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;

    CaseBCLabel label{p, ti, detail::bc_case_tag(g)};
    kept.push_back({label, std::move(folder), std::move(table)});
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const BCEntry& a, const BCEntry& b) {
                     if (a.label.case_tag != b.label.case_tag)
                       return a.label.case_tag < b.label.case_tag;
                     return a.label.tau_index < b.label.tau_index;
                   });

  CountReport expected = total_rcc_count(p);
  long long nb = 0, nc = 0;
  for (const auto& e : kept) (e.label.case_tag == 'b' ? nb : nc)++;
  if (BigInt(nb) != expected.case_b || BigInt(nc) != expected.case_c) {
    std::ostringstream msg;
    msg << "case_bc_search(p=" << p << "): found (" << nb << "," << nc
        << "), expected (" << expected.case_b << "," << expected.case_c
        << ")";
    throw CountMismatch(msg.str());
  }
  return kept;
}

enum class VerifyMode { counts_only, full_iso };

struct EnvelopeStats {
  long long order = 0;
  bool soluble = false;
  bool block_found = false;
};

struct InventoryEntry {
  std::string label;
  char case_tag = 'a';
  LoopTable table;
  bool rcc = false;
  bool lcc = false;
  bool associative = false;
  std::optional<Fingerprint> fp;
  std::optional<EnvelopeStats> env;
};

struct IsoInventory {
  int p = 0;
  std::vector<InventoryEntry> entries;
  long long count_a = 0, count_b = 0, count_c = 0;
};

/// Full isomorphism-class inventory at order 2p: representative wreath-type
/// loops plus the affine search results.  counts_only checks sizes against
/// the closed formulas; full_iso additionally verifies global pairwise
/// non-isomorphism (and with it that the case tags partition the inventory).
inline IsoInventory enumerate_2p(int p, VerifyMode mode) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw NotOddPrime("enumerate_2p: p must be an odd prime");
  IsoInventory inv;
  inv.p = p;

  WreathContext wctx = wreath_context(p);
  for (const auto& label : case_a_representatives(p)) {
    auto [folder, table] = case_a_loop(wctx, label);
    InventoryEntry entry;
    entry.label = label.text();
    entry.case_tag = 'a';
    entry.rcc = is_rcc(table);
    entry.lcc = is_lcc(table);
    entry.associative = is_associative(table);
    entry.table = std::move(table);
    inv.entries.push_back(std::move(entry));
    ++inv.count_a;
  }
  for (auto& bc : case_bc_search(p)) {
    InventoryEntry entry;
    entry.label = bc.label.text();
    entry.case_tag = bc.label.case_tag;
    entry.rcc = is_rcc(bc.table);
    entry.lcc = is_lcc(bc.table);
    entry.associative = is_associative(bc.table);
    entry.table = std::move(bc.table);
    inv.entries.push_back(std::move(entry));
    (bc.label.case_tag == 'b' ? inv.count_b : inv.count_c)++;
  }

  CountReport expected = total_rcc_count(p);
  if (BigInt(inv.count_a) != expected.case_a ||
      BigInt(inv.count_b) != expected.case_b ||
      BigInt(inv.count_c) != expected.case_c) {
    std::ostringstream msg;
    msg << "enumerate_2p(p=" << p << "): case counts (" << inv.count_a << ","
        << inv.count_b << "," << inv.count_c << ") do not match ("
        << expected.case_a << "," << expected.case_b << ","
        << expected.case_c << ")";
    throw CountMismatch(msg.str());
  }

  if (mode == VerifyMode::full_iso) {
    std::unordered_map<std::string, std::vector<int>> buckets;
    for (int i = 0; i < static_cast<int>(inv.entries.size()); ++i) {
      auto& entry = inv.entries[i];
      entry.fp = fingerprint(entry.table);
      LoopFolder env = envelope_of_loop(entry.table);
      EnvelopeStats stats;
      stats.order = env.group->order();
      stats.soluble = is_soluble(*env.group);
      stats.block_found = block_system(*env.group).has_value();
      entry.env = stats;
      buckets[entry.fp->key()].push_back(i);
    }
    for (const auto& [key, ids] : buckets)
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
          if (are_isomorphic(inv.entries[ids[a]].table,
                             inv.entries[ids[b]].table)) {
            std::ostringstream msg;
            msg << "labels " << inv.entries[ids[a]].label << " and "
                << inv.entries[ids[b]].label << " gave isomorphic loops";
            throw IsoCollision(msg.str());
          }
  }
  return inv;
}

struct StructureReport {
  int entries_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool is_p_power_order(long long ord, int p) {
  while (ord % p == 0) ord /= p;
  return ord == 1;
}

}  // namespace detail

/// Recomputes each entry's envelope from its table alone and checks the
/// structural claims for its case: the index-2 overgroup of the stabilizer,
/// the wreath or affine shape of the group, imprimitivity, the transversal
/// lemmas, and solubility.  Throws StructureViolation when anything fails.
inline StructureReport verify_structure(const IsoInventory& inv) {
  StructureReport report;
  int p = inv.p;
  for (const auto& entry : inv.entries) {
    ++report.entries_checked;
    auto fail = [&](const std::string& what) {
      report.violations.push_back(entry.label + ": " + what);
    };
    LoopFolder env = envelope_of_loop(entry.table);
    const GroupView& g = *env.group;

    if (!is_soluble(g)) fail("envelope not soluble");
    if (!block_system(g).has_value()) fail("no block system");
    if (!check_section3_lemmas(env).all_ok()) fail("transversal lemmas failed");

    auto index2 = index_two_subgroups(g);
    std::vector<std::vector<int>> k_over_h;
    for (auto& k : index2) {
      bool contains_h =
          std::all_of(env.subgroup.begin(), env.subgroup.end(), [&](int h) {
            return std::binary_search(k.begin(), k.end(), h);
          });
      if (contains_h) k_over_h.push_back(std::move(k));
    }
    if (k_over_h.empty()) fail("no index-2 subgroup above the stabilizer");

    if (entry.case_tag == 'a') {
      if (g.order() != 2LL * p * p) fail("wreath case: group order is not 2p^2");
      std::vector<int> p_part;
      for (int i = 0; i < g.order(); ++i)
        if (detail::is_p_power_order(g.elements[i].order(), p))
          p_part.push_back(i);
      if (static_cast<long long>(p_part.size()) != 1LL * p * p ||
          !is_subgroup(g, p_part))
        fail("wreath case: p-elements do not form a subgroup of order p^2");
      else {
        bool elementary = true, abelian = true;
        for (int i : p_part) {
          long long ord = g.elements[i].order();
          if (ord != 1 && ord != p) elementary = false;
        }
        for (int a : p_part)
          for (int b : p_part)
            if (g.mul(a, b) != g.mul(b, a)) abelian = false;
        if (!elementary) fail("wreath case: O_p not elementary");
        if (!abelian) fail("wreath case: O_p not abelian");
      }
    } else {
      bool found = false;
      for (const auto& k : k_over_h) {
        std::vector<int> t_in_k;
        for (int t : env.transversal)
          if (std::binary_search(k.begin(), k.end(), t)) t_in_k.push_back(t);
        std::vector<int> tk = subgroup_closure_indices(g, t_in_k);
        if (static_cast<long long>(tk.size()) != p) continue;
        bool normal = true;
        for (int a : tk)
          for (int x = 0; x < g.order() && normal; ++x)
            if (!std::binary_search(tk.begin(), tk.end(), g.conj(a, x)))
              normal = false;
        if (!normal) continue;
        // Affine shape: the normal order-p subgroup is self-centralizing
        // inside the odd part (case c) or the whole group (case b).
        std::vector<int> cent;
        for (int x = 0; x < g.order(); ++x) {
          bool commutes = true;
          for (int a : tk)
            if (g.mul(a, x) != g.mul(x, a)) {
              commutes = false;
              break;
            }
          if (commutes) cent.push_back(x);
        }
        if (entry.case_tag == 'b') {
          if (cent == tk) found = true;
        } else {
          if (detail::bc_case_tag(g) != 'c') continue;
          // cent = TK x <central involution>; its odd part must be TK.
          std::vector<int> cent_odd;
          for (int x : cent)
            if (g.elements[x].order() % 2 == 1) cent_odd.push_back(x);
          if (cent_odd == tk) found = true;
        }
        if (found) break;
      }
      if (!found)
        fail(entry.case_tag == 'b'
                 ? "affine case: no normal order-p transversal part"
                 : "direct-factor case: decomposition failed");
      if (entry.case_tag == 'c' && detail::bc_case_tag(g) != 'c')
        fail("direct-factor case: no central involution splitting");
      if (entry.case_tag == 'b' && detail::bc_case_tag(g) == 'c')
        fail("affine case: group has a direct-factor splitting");
    }
  }
  if (!report.violations.empty()) {
    std::ostringstream msg;
    msg << "verify_structure: " << report.violations.size() << " violation(s):";
    for (const auto& v : report.violations) msg << "\n  " << v;
    throw StructureViolation(msg.str());
  }
  return report;
}

}  // namespace rccloop
