#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rccloop/errors.hpp"
#include "rccloop/group.hpp"
#include "rccloop/loop.hpp"

namespace rccloop {

/// A triple (G, H, T): subgroup H of G and a subset T containing the
/// identity that is a simultaneous transversal for every conjugate of H.
/// H and T are stored as sorted indices into the group's element table.
struct LoopFolder {
  std::shared_ptr<const GroupView> group;
  std::vector<int> subgroup;
  std::vector<int> transversal;
};

struct FolderReport {
  bool is_folder = false;
  bool is_rcc = false;
  bool is_faithful = false;
  long long order = 0;
  bool literal_agrees_sharp = false;
};

namespace detail {

/// T meets every right coset of the subgroup spanned by `mask` exactly once.
inline bool hits_each_coset_once(const GroupView& g,
                                 const std::vector<int>& sub,
                                 const std::vector<int>& transversal) {
  std::vector<int> coset_of(g.elements.size(), -1);
  int num = 0;
  for (int e = 0; e < g.order(); ++e) {
    if (coset_of[e] >= 0) continue;
    int id = num++;
    for (int h : sub) coset_of[g.mul(h, e)] = id;
  }
  std::vector<int> hits(num, 0);
  for (int t : transversal)
    if (++hits[coset_of[t]] > 1) return false;
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

struct IndexVectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace detail

/// Checks the transversal condition both literally (over all conjugates of H)
/// and through the sharply transitive criterion on the coset action; the two
/// answers must coincide.  Also reports conjugation closure of T and
/// triviality of the core of H.
inline FolderReport validate_folder(const GroupView& g,
                                    const std::vector<int>& subgroup,
                                    const std::vector<int>& transversal) {
  if (!is_subgroup(g, subgroup)) throw NotASubgroup("validate_folder: H");
  FolderReport report;
  report.order = static_cast<long long>(transversal.size());

  bool has_identity =
      std::find(transversal.begin(), transversal.end(), 0) != transversal.end();
  long long index = g.order() / static_cast<long long>(subgroup.size());
  bool size_ok = static_cast<long long>(transversal.size()) == index;

  // Literal check, deduplicating repeated conjugate subgroups.
  bool literal = has_identity && size_ok;
  if (literal) {
    std::unordered_set<std::vector<int>, detail::IndexVectorHash> seen;
    for (int x = 0; x < g.order() && literal; ++x) {
      std::vector<int> conj;
      conj.reserve(subgroup.size());
      for (int h : subgroup) conj.push_back(g.conj(h, x));
      std::sort(conj.begin(), conj.end());
      if (!seen.insert(conj).second) continue;
      literal = detail::hits_each_coset_once(g, conj, transversal);
    }
  }

  // Sharply transitive check: in the action on H\G every (source, target)
  // pair of cosets is hit by exactly one t in T.
  bool sharp = has_identity && size_ok;
  if (sharp) {
    CosetAction ca = coset_action(g, subgroup);
    std::vector<int> hits(static_cast<std::size_t>(ca.num_cosets) *
                              ca.num_cosets,
                          0);
    for (int t : transversal) {
      const Permutation& pt = ca.action[t];
      for (int c = 0; c < ca.num_cosets; ++c)
        ++hits[static_cast<std::size_t>(c) * ca.num_cosets + pt(c)];
    }
    sharp = std::all_of(hits.begin(), hits.end(),
                        [](int h) { return h == 1; });
    report.is_faithful = ca.kernel.size() == 1;
  }

  if (literal != sharp)
    throw InternalError("transversal checks disagree");
  report.literal_agrees_sharp = true;
  report.is_folder = literal;

  std::vector<char> in_t(g.elements.size(), 0);
  for (int t : transversal) in_t[t] = 1;
  bool rcc = true;
  for (int t : transversal) {
    for (const auto& gen : g.generators) {
      int gi = g.index_of(gen);
      if (!in_t[g.conj(t, gi)]) {
        rcc = false;
        break;
      }
    }
    if (!rcc) break;
  }
  report.is_rcc = rcc;
  return report;
}

inline FolderReport validate_folder(const LoopFolder& f) {
  return validate_folder(*f.group, f.subgroup, f.transversal);
}

/// Builds the loop on the right cosets of H.  Loop elements are the members
/// of T in group element order (so the identity is element 0); a*b is the
/// unique t in T lying in the coset H(ab).
inline LoopTable loop_from_folder(const GroupView& g,
                                  const std::vector<int>& subgroup,
                                  const std::vector<int>& transversal) {
  if (!is_subgroup(g, subgroup)) throw NotASubgroup("loop_from_folder: H");
  std::vector<int> tsorted = transversal;
  std::sort(tsorted.begin(), tsorted.end());
  if (tsorted.empty() || tsorted[0] != 0)
    throw NotAFolder("transversal misses the identity");

  std::vector<int> coset_of(g.elements.size(), -1);
  int num = 0;
  for (int e = 0; e < g.order(); ++e) {
    if (coset_of[e] >= 0) continue;
    int id = num++;
    for (int h : subgroup) coset_of[g.mul(h, e)] = id;
  }
  if (num != static_cast<int>(tsorted.size()))
    throw NotAFolder("transversal size differs from the subgroup index");
  std::vector<int> t_at_coset(num, -1);
  for (int i = 0; i < static_cast<int>(tsorted.size()); ++i) {
    int c = coset_of[tsorted[i]];
    if (t_at_coset[c] >= 0) throw NotAFolder("coset met twice");
    t_at_coset[c] = i;
  }

  int n = num;
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rows[i][j] = t_at_coset[coset_of[g.mul(tsorted[i], tsorted[j])]];
  try {
    return LoopTable::from_rows(rows);
  } catch (const InvalidTable& e) {
    throw NotAFolder(std::string("folder does not define a loop: ") +
                     e.what());
  }
}

inline LoopTable loop_from_folder(const LoopFolder& f) {
  return loop_from_folder(*f.group, f.subgroup, f.transversal);
}

/// Whether the envelope of the loop built from (g, subgroup, transversal)
/// equals g as a permutation group, after relabeling loop element i to the
/// image of a base point (one stabilized exactly by the subgroup) under the
/// i-th transversal member.  Any such base point gives the same verdict.
inline bool permutation_equivalent(const GroupView& envelope,
                                   const GroupView& g,
                                   const std::vector<int>& subgroup,
                                   const std::vector<int>& transversal) {
  if (envelope.order() != g.order() || envelope.degree != g.degree)
    return false;
  int base = -1;
  for (int c = 0; c < g.degree && base < 0; ++c) {
    long long stab = 0;
    bool sub_fixes = true;
    for (int h : subgroup)
      if (g.elements[h](c) != c) {
        sub_fixes = false;
        break;
      }
    if (!sub_fixes) continue;
    for (int e = 0; e < g.order(); ++e)
      if (g.elements[e](c) == c) ++stab;
    if (stab == static_cast<long long>(subgroup.size())) base = c;
  }
  if (base < 0) return false;
  std::vector<int> tsorted = transversal;
  std::sort(tsorted.begin(), tsorted.end());
  std::vector<int> sigma(tsorted.size());
  for (std::size_t i = 0; i < tsorted.size(); ++i)
    sigma[i] = g.elements[tsorted[i]](base);
  for (const auto& e : envelope.elements) {
    std::vector<int> img(e.degree());
    for (int i = 0; i < e.degree(); ++i) img[sigma[i]] = sigma[e(i)];
    if (!g.contains(Permutation(std::move(img)))) return false;
  }
  return true;
}

/// Envelope of a loop: the right multiplication group, the stabilizer of 0,
/// and the translation set.
inline LoopFolder envelope_of_loop(const LoopTable& t, long long cap = 0) {
  auto translations = right_translations(t);
  auto view = std::make_shared<GroupView>(closure(translations, cap));
  LoopFolder f;
  f.subgroup.clear();
  for (int i = 0; i < view->order(); ++i)
    if (view->elements[i](0) == 0) f.subgroup.push_back(i);
  f.transversal.clear();
  for (const auto& r : translations) f.transversal.push_back(view->index_of(r));
  std::sort(f.transversal.begin(), f.transversal.end());
  f.group = std::move(view);
  return f;
}

/// Index-2 subgroups of g, via the subgroup generated by the derived
/// subgroup and all squares (every index-2 subgroup contains it).
inline std::vector<std::vector<int>> index_two_subgroups(const GroupView& g) {
  std::vector<int> seed = derived_indices(g);
  for (int e = 0; e < g.order(); ++e) seed.push_back(g.mul(e, e));
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  std::vector<int> m = subgroup_closure_indices(g, seed);
  if (static_cast<long long>(m.size()) == g.order()) return {};

  std::vector<int> coset_of(g.elements.size(), -1);
  std::vector<int> reps;
  for (int e = 0; e < g.order(); ++e) {
    if (coset_of[e] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(e);
    for (int h : m) coset_of[g.mul(h, e)] = id;
  }
  int q = static_cast<int>(reps.size());

  // The quotient is elementary abelian of exponent 2; give every coset
  // F2-coordinates over a greedy basis.
  std::vector<int> coords(q, -1);
  coords[coset_of[0]] = 0;
  std::vector<int> basis;
  std::vector<int> span{coset_of[0]};
  for (int id = 0; id < q; ++id) {
    if (coords[id] >= 0) continue;
    int k = static_cast<int>(basis.size());
    basis.push_back(id);
    std::vector<int> extension;
    for (int s : span) {
      int ns = coset_of[g.mul(reps[s], reps[id])];
      coords[ns] = coords[s] | (1 << k);
      extension.push_back(ns);
    }
    span.insert(span.end(), extension.begin(), extension.end());
  }
  int rank = static_cast<int>(basis.size());

  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << rank); ++mask) {
    std::vector<int> k_elems;
    for (int e = 0; e < g.order(); ++e)
      if (__builtin_parity(coords[coset_of[e]] & mask) == 0)
        k_elems.push_back(e);
    out.push_back(std::move(k_elems));
  }
  return out;
}

/// Structural checks on a folder: commuting normalizing transversal members,
/// the class-length bound for subgroups above HG', and (for folders of even
/// order with an index-2 overgroup of H) the order-|T|/2 subfolder extracted
/// inside it.
struct Section3Report {
  bool hypothesis_met = false;  // T invariant under H-conjugation
  bool normalizer_commutes = true;
  int normalizing_count = 0;

  struct KBound {
    long long k_order = 0;
    long long bound = 0;           // |K:H|
    long long max_class_len = 0;   // over t in T
    bool ok = false;
  };
  std::vector<KBound> k_bounds;
  bool bounds_ok = true;

  bool subfolder_checked = false;
  bool subfolder_is_rcc_folder = false;
  bool k1_abelian = false;
  long long k1_order = 0;
  long long h1_order = 0;
  bool k1_normal_in_k = false;
  bool k_equals_h_times_k1 = false;
  bool h1_normal_in_k = false;

  bool all_ok() const {
    bool sub_ok = !subfolder_checked ||
                  (subfolder_is_rcc_folder && k1_abelian && k1_normal_in_k &&
                   k_equals_h_times_k1 && h1_normal_in_k);
    return hypothesis_met && normalizer_commutes && bounds_ok && sub_ok;
  }
};

inline Section3Report check_section3_lemmas(const GroupView& g,
                                            const std::vector<int>& subgroup,
                                            const std::vector<int>& transversal) {
  Section3Report report;
  std::vector<char> in_t(g.elements.size(), 0);
  for (int t : transversal) in_t[t] = 1;
  std::vector<char> in_h = detail::member_mask(g, subgroup);

  report.hypothesis_met = true;
  for (int t : transversal)
    for (int h : subgroup)
      if (!in_t[g.conj(t, h)]) report.hypothesis_met = false;
  if (!report.hypothesis_met) return report;

  // Members of T normalizing H must centralize it.
  for (int t : transversal) {
    bool normalizes = true;
    for (int h : subgroup)
      if (!in_h[g.conj(h, t)]) {
        normalizes = false;
        break;
      }
    if (!normalizes) continue;
    ++report.normalizing_count;
    for (int h : subgroup)
      if (g.mul(t, h) != g.mul(h, t)) report.normalizer_commutes = false;
  }

  // Class-length bound for every subgroup K between HG' and G reachable by
  // a one-element extension (a sweep; HG' and G themselves included).
  std::vector<int> class_of(g.elements.size(), -1);
  auto classes = conjugacy_classes(g);
  for (int c = 0; c < static_cast<int>(classes.size()); ++c)
    for (int e : classes[c]) class_of[e] = c;
  long long max_class = 0;
  for (int t : transversal)
    max_class = std::max(
        max_class, static_cast<long long>(classes[class_of[t]].size()));

  std::vector<int> hg_seed = derived_indices(g);
  hg_seed.insert(hg_seed.end(), subgroup.begin(), subgroup.end());
  std::vector<int> hg = subgroup_closure_indices(g, hg_seed);
  std::unordered_set<std::vector<int>, detail::IndexVectorHash> seen;
  std::vector<std::vector<int>> candidates{hg};
  seen.insert(hg);
  for (int x = 0; x < g.order(); ++x) {
    if (std::binary_search(hg.begin(), hg.end(), x)) continue;
    std::vector<int> ext = hg;
    ext.push_back(x);
    std::vector<int> k = subgroup_closure_indices(g, ext);
    if (seen.insert(k).second) candidates.push_back(std::move(k));
  }
  for (const auto& k : candidates) {
    Section3Report::KBound kb;
    kb.k_order = static_cast<long long>(k.size());
    kb.bound = kb.k_order / static_cast<long long>(subgroup.size());
    kb.max_class_len = max_class;
    kb.ok = max_class <= kb.bound;
    if (!kb.ok) report.bounds_ok = false;
    report.k_bounds.push_back(kb);
  }

  // Subfolder inside an index-2 overgroup of H, when one exists.
  for (const auto& k : index_two_subgroups(g)) {
    bool contains_h = std::all_of(subgroup.begin(), subgroup.end(), [&](int h) {
      return std::binary_search(k.begin(), k.end(), h);
    });
    if (!contains_h) continue;
    report.subfolder_checked = true;
    std::vector<int> t1;
    for (int t : transversal)
      if (std::binary_search(k.begin(), k.end(), t)) t1.push_back(t);
    std::vector<int> k1 = subgroup_closure_indices(g, t1);
    std::vector<int> h1;
    for (int h : subgroup)
      if (std::binary_search(k1.begin(), k1.end(), h)) h1.push_back(h);
    report.k1_order = static_cast<long long>(k1.size());
    report.h1_order = static_cast<long long>(h1.size());

    report.k1_abelian = true;
    for (int a : k1)
      for (int b : k1)
        if (g.mul(a, b) != g.mul(b, a)) {
          report.k1_abelian = false;
          break;
        }

    report.k1_normal_in_k = true;
    for (int a : k1)
      for (int x : k)
        if (!std::binary_search(k1.begin(), k1.end(), g.conj(a, x)))
          report.k1_normal_in_k = false;
    report.h1_normal_in_k = true;
    for (int a : h1)
      for (int x : k)
        if (!std::binary_search(h1.begin(), h1.end(), g.conj(a, x)))
          report.h1_normal_in_k = false;
    report.k_equals_h_times_k1 =
        static_cast<long long>(k.size()) ==
        static_cast<long long>(subgroup.size()) * report.k1_order /
            std::max<long long>(1, report.h1_order);

    // (K1, H1, T1) as a folder in its own right.
    GroupView k1_view = subgroup_view(g, k1);
    std::vector<int> h1_idx, t1_idx;
    for (int h : h1) h1_idx.push_back(k1_view.index_of(g.elements[h]));
    for (int t : t1) t1_idx.push_back(k1_view.index_of(g.elements[t]));
    std::sort(h1_idx.begin(), h1_idx.end());
    std::sort(t1_idx.begin(), t1_idx.end());
    FolderReport sub = validate_folder(k1_view, h1_idx, t1_idx);
    report.subfolder_is_rcc_folder = sub.is_folder && sub.is_rcc;
    break;
  }
  return report;
}

inline Section3Report check_section3_lemmas(const LoopFolder& f) {
  return check_section3_lemmas(*f.group, f.subgroup, f.transversal);
}

}  // namespace rccloop
