#pragma once

#include <algorithm>
#include <atomic>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rccloop/errors.hpp"
#include "rccloop/perm.hpp"

namespace rccloop {

inline constexpr long long kDefaultGroupCap = 100000;

/// Process-wide override for the closure cap, settable once at startup.
inline std::atomic<long long>& group_cap() {
  static std::atomic<long long> cap{kDefaultGroupCap};
  return cap;
}

/// A finite permutation group materialized as its full element table.
///
/// Elements are stored in breadth-first order from the identity, expanding
/// by the generators in their given order, so the table (and everything
/// derived from it) is reproducible bit for bit.
struct GroupView {
  int degree = 0;
  std::vector<Permutation> generators;
  std::vector<Permutation> elements;
  std::unordered_map<Permutation, int, PermHash> index;
  std::vector<int> inverse_index;

  long long order() const { return static_cast<long long>(elements.size()); }

  int index_of(const Permutation& p) const {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
  }

  bool contains(const Permutation& p) const { return index.count(p) != 0; }

  /// Index of elements[i] * elements[j].
  int mul(int i, int j) const {
    int at = index.find(elements[i] * elements[j])->second;
    return at;
  }

  int inv(int i) const { return inverse_index[i]; }

  /// Index of elements[i] conjugated by elements[j].
  int conj(int i, int j) const {
    return index.find(elements[i].conjugated_by(elements[j]))->second;
  }
};

/// Full element table of <generators>; throws CapExceeded if the group grows
/// past `cap` (cap = 0 uses the process-wide default).
inline GroupView closure(const std::vector<Permutation>& generators,
                         long long cap = 0) {
  if (cap <= 0) cap = group_cap().load();
  if (generators.empty()) throw InvalidArgument("closure needs a generator");
  int degree = generators.front().degree();
  for (const auto& g : generators)
    if (g.degree() != degree)
      throw InvalidArgument("generators have mixed degrees");

  GroupView view;
  view.degree = degree;
  view.generators = generators;
  view.elements.push_back(Permutation::identity(degree));
  view.index.emplace(view.elements[0], 0);
  for (std::size_t head = 0; head < view.elements.size(); ++head) {
    for (const auto& g : generators) {
      Permutation next = view.elements[head] * g;
      if (view.index.emplace(next, static_cast<int>(view.elements.size()))
              .second) {
        view.elements.push_back(std::move(next));
        if (static_cast<long long>(view.elements.size()) > cap)
          throw CapExceeded("group closure exceeded cap");
      }
    }
  }
  view.inverse_index.resize(view.elements.size());
  for (std::size_t i = 0; i < view.elements.size(); ++i)
    view.inverse_index[i] = view.index_of(view.elements[i].inverse());
  return view;
}

namespace detail {

inline std::vector<char> member_mask(const GroupView& g,
                                     const std::vector<int>& subset) {
  std::vector<char> mask(g.elements.size(), 0);
  for (int i : subset) mask[i] = 1;
  return mask;
}

inline std::vector<int> mask_to_sorted(const std::vector<char>& mask) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace detail

/// Subgroup generated inside `g` by the elements with the given indices,
/// returned as a sorted index list.
inline std::vector<int> subgroup_closure_indices(const GroupView& g,
                                                 const std::vector<int>& seed) {
  std::vector<char> mask(g.elements.size(), 0);
  std::vector<int> work;
  mask[0] = 1;
  work.push_back(0);
  auto add = [&](int idx) {
    if (!mask[idx]) {
      mask[idx] = 1;
      work.push_back(idx);
    }
  };
  for (int s : seed) add(s);
  std::vector<int> gens = seed;
  for (std::size_t head = 0; head < work.size(); ++head)
    for (int s : seed) add(g.mul(work[head], s));
  return detail::mask_to_sorted(mask);
}

inline bool is_subgroup(const GroupView& g, const std::vector<int>& subset) {
  auto mask = detail::member_mask(g, subset);
  if (subset.empty() || !mask[0]) return false;
  for (int a : subset)
    for (int b : subset)
      if (!mask[g.mul(a, b)]) return false;
  return true;
}

/// Partition of the elements into conjugacy classes.  Classes appear in order
/// of their smallest member; members are sorted ascending.
inline std::vector<std::vector<int>> conjugacy_classes(const GroupView& g) {
  long long n = g.order();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> classes;
  std::vector<int> gen_idx;
  for (const auto& gen : g.generators) gen_idx.push_back(g.index_of(gen));
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cls{i};
    seen[i] = 1;
    for (std::size_t head = 0; head < cls.size(); ++head) {
      for (int gi : gen_idx) {
        int c = g.conj(cls[head], gi);
        if (!seen[c]) {
          seen[c] = 1;
          cls.push_back(c);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

/// Centralizer of x in g, as sorted element indices.
inline std::vector<int> centralizer(const GroupView& g, const Permutation& x) {
  int xi = g.index_of(x);
  if (xi < 0) throw ElementNotInGroup("centralizer: element not in group");
  std::vector<int> out;
  for (int j = 0; j < g.order(); ++j)
    if (g.mul(j, xi) == g.mul(xi, j)) out.push_back(j);
  return out;
}

inline std::vector<int> center(const GroupView& g) {
  std::vector<int> gen_idx;
  for (const auto& gen : g.generators) gen_idx.push_back(g.index_of(gen));
  std::vector<int> out;
  for (int j = 0; j < g.order(); ++j) {
    bool central = true;
    for (int gi : gen_idx)
      if (g.mul(j, gi) != g.mul(gi, j)) {
        central = false;
        break;
      }
    if (central) out.push_back(j);
  }
  return out;
}

namespace detail {

/// Derived subgroup of the subgroup generated by `gen_idx`, computed as the
/// normal closure of the generator commutators.  Returns (element indices,
/// generating indices).
inline std::pair<std::vector<int>, std::vector<int>> derived_of(
    const GroupView& g, const std::vector<int>& gen_idx) {
  std::vector<int> comm_gens;
  std::unordered_set<int> seen;
  auto push = [&](int idx) {
    if (seen.insert(idx).second) comm_gens.push_back(idx);
  };
  for (int a : gen_idx)
    for (int b : gen_idx) {
      int c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
      if (c != 0) push(c);
    }
  // Saturate under conjugation by the subgroup generators.
  while (true) {
    std::vector<int> members = subgroup_closure_indices(g, comm_gens);
    bool stable = true;
    for (int m : members) {
      for (int s : gen_idx) {
        int c = g.conj(m, s);
        if (!std::binary_search(members.begin(), members.end(), c)) {
          push(c);
          stable = false;
        }
      }
      if (!stable) break;
    }
    if (stable) return {members, comm_gens};
  }
}

}  // namespace detail

/// Sorted element indices of the derived subgroup of g.
inline std::vector<int> derived_indices(const GroupView& g) {
  std::vector<int> gen_idx;
  for (const auto& gen : g.generators) gen_idx.push_back(g.index_of(gen));
  return detail::derived_of(g, gen_idx).first;
}

/// Materializes the subgroup spanned by the given element indices as its own
/// GroupView (same degree, deterministic order).
inline GroupView subgroup_view(const GroupView& g,
                               const std::vector<int>& indices,
                               long long cap = 0) {
  std::vector<Permutation> gens;
  for (int i : indices)
    if (i != 0) gens.push_back(g.elements[i]);
  if (gens.empty()) gens.push_back(Permutation::identity(g.degree));
  return closure(gens, cap);
}

inline GroupView derived_subgroup(const GroupView& g) {
  return subgroup_view(g, derived_indices(g));
}

/// Derived series reaches the trivial group.
inline bool is_soluble(const GroupView& g) {
  std::vector<int> gen_idx;
  for (const auto& gen : g.generators) gen_idx.push_back(g.index_of(gen));
  std::vector<int> current = subgroup_closure_indices(g, gen_idx);
  while (true) {
    auto [members, gens] = detail::derived_of(g, gen_idx);
    if (members.size() == 1) return true;
    if (members.size() == current.size()) return false;
    current = std::move(members);
    gen_idx = std::move(gens);
  }
}

/// Core of the subgroup in g: the intersection of all conjugates, computed
/// directly.
inline std::vector<int> core_of(const GroupView& g,
                                const std::vector<int>& subgroup) {
  std::vector<char> core = detail::member_mask(g, subgroup);
  for (int x = 1; x < g.order(); ++x) {
    std::vector<char> conj_mask(g.elements.size(), 0);
    for (int h : subgroup) conj_mask[g.conj(h, x)] = 1;
    for (std::size_t i = 0; i < core.size(); ++i) core[i] &= conj_mask[i];
  }
  return detail::mask_to_sorted(core);
}

/// Right-coset action of g on subgroup\g.
///
/// Cosets are numbered by first appearance when scanning the element table,
/// so the coset of the identity is 0.  `action[i]` is the permutation induced
/// by elements[i]; `kernel` holds the indices acting trivially (the core of
/// the subgroup).
struct CosetAction {
  int num_cosets = 0;
  std::vector<int> coset_of;    // element index -> coset id
  std::vector<int> coset_reps;  // coset id -> smallest element index
  std::vector<Permutation> action;
  std::vector<int> kernel;
};

inline CosetAction coset_action(const GroupView& g,
                                const std::vector<int>& subgroup) {
  if (!is_subgroup(g, subgroup))
    throw NotASubgroup("coset_action: not a subgroup");
  CosetAction ca;
  ca.coset_of.assign(g.elements.size(), -1);
  for (int e = 0; e < g.order(); ++e) {
    if (ca.coset_of[e] >= 0) continue;
    int id = ca.num_cosets++;
    ca.coset_reps.push_back(e);
    for (int h : subgroup) ca.coset_of[g.mul(h, e)] = id;
  }
  ca.action.reserve(g.elements.size());
  for (int e = 0; e < g.order(); ++e) {
    std::vector<int> img(ca.num_cosets);
    for (int c = 0; c < ca.num_cosets; ++c)
      img[c] = ca.coset_of[g.mul(ca.coset_reps[c], e)];
    ca.action.push_back(Permutation(std::move(img)));
    if (ca.action.back().is_identity()) ca.kernel.push_back(e);
  }
  return ca;
}

inline bool is_transitive(const GroupView& g) {
  std::vector<char> seen(g.degree, 0);
  std::vector<int> work{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < work.size(); ++head)
    for (const auto& gen : g.generators) {
      int y = gen(work[head]);
      if (!seen[y]) {
        seen[y] = 1;
        work.push_back(y);
      }
    }
  return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

/// Smallest block containing both 0 and beta (the standard union-find block
/// algorithm).
inline std::vector<int> minimal_block_with(const GroupView& g, int beta) {
  UnionFind uf(g.degree);
  std::vector<std::pair<int, int>> queue;
  uf.unite(0, beta);
  queue.emplace_back(0, beta);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [a, b] = queue[head];
    for (const auto& gen : g.generators) {
      int x = gen(a), y = gen(b);
      if (uf.unite(x, y)) queue.emplace_back(x, y);
    }
  }
  std::vector<int> block;
  int root = uf.find(0);
  for (int x = 0; x < g.degree; ++x)
    if (uf.find(x) == root) block.push_back(x);
  return block;
}

}  // namespace detail

/// A minimal nontrivial block containing the point 0, or nullopt when the
/// (transitive) group is primitive.
inline std::optional<std::vector<int>> block_system(const GroupView& g) {
  if (!is_transitive(g)) throw NotTransitive("block_system: not transitive");
  std::optional<std::vector<int>> best;
  for (int beta = 1; beta < g.degree; ++beta) {
    auto block = detail::minimal_block_with(g, beta);
    if (static_cast<int>(block.size()) == g.degree) continue;
    if (!best || block.size() < best->size() ||
        (block.size() == best->size() && block < *best))
      best = std::move(block);
  }
  return best;
}

}  // namespace rccloop
