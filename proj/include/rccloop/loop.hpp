#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rccloop/errors.hpp"
#include "rccloop/group.hpp"
#include "rccloop/perm.hpp"

namespace rccloop {

/// An n x n Cayley table over {0..n-1} with the identity at index 0.
/// Every row and column is a permutation, row 0 and column 0 are the
/// identity sequence.
class LoopTable {
public:
  LoopTable() = default;

  static LoopTable from_rows(const std::vector<std::vector<int>>& rows) {
    LoopTable t;
    t.n_ = static_cast<int>(rows.size());
    if (t.n_ == 0) throw InvalidTable("empty table");
    if (t.n_ > 255) throw InvalidTable("order too large");
    t.cells_.resize(static_cast<std::size_t>(t.n_) * t.n_);
    for (int i = 0; i < t.n_; ++i) {
      if (static_cast<int>(rows[i].size()) != t.n_) {
        std::ostringstream msg;
        msg << "row " << i << " has wrong length";
        throw InvalidTable(msg.str());
      }
      for (int j = 0; j < t.n_; ++j) {
        int v = rows[i][j];
        if (v < 0 || v >= t.n_) {
          std::ostringstream msg;
          msg << "entry out of range at (" << i << "," << j << ")";
          throw InvalidTable(msg.str());
        }
        t.cells_[static_cast<std::size_t>(i) * t.n_ + j] =
            static_cast<std::uint8_t>(v);
      }
    }
    if (auto reason = t.violation()) throw InvalidTable(*reason);
    return t;
  }

  /// Cayley table of a permutation group in its own element order.
  static LoopTable from_group(const GroupView& g) {
    std::vector<std::vector<int>> rows(g.order(), std::vector<int>(g.order()));
    for (int i = 0; i < g.order(); ++i)
      for (int j = 0; j < g.order(); ++j) rows[i][j] = g.mul(i, j);
    return from_rows(rows);
  }

  int order() const { return n_; }
  int at(int i, int j) const {
    return cells_[static_cast<std::size_t>(i) * n_ + j];
  }

  /// Reason the table fails the loop invariants, or nullopt if valid.
  std::optional<std::string> violation() const {
    for (int i = 0; i < n_; ++i) {
      std::vector<char> seen(n_, 0);
      for (int j = 0; j < n_; ++j) {
        int v = at(i, j);
        if (seen[v]) {
          std::ostringstream msg;
          msg << "row " << i << " not a permutation";
          return msg.str();
        }
        seen[v] = 1;
      }
    }
    for (int j = 0; j < n_; ++j) {
      std::vector<char> seen(n_, 0);
      for (int i = 0; i < n_; ++i) {
        int v = at(i, j);
        if (seen[v]) {
          std::ostringstream msg;
          msg << "column " << j << " not a permutation";
          return msg.str();
        }
        seen[v] = 1;
      }
    }
    for (int j = 0; j < n_; ++j)
      if (at(0, j) != j) return "row 0 is not the identity";
    for (int i = 0; i < n_; ++i)
      if (at(i, 0) != i) return "column 0 is not the identity";
    return std::nullopt;
  }

  bool operator==(const LoopTable& other) const = default;
  auto operator<=>(const LoopTable& other) const = default;

private:
  int n_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Right translations R_a with R_a(x) = x*a; R_0 is the identity.
inline std::vector<Permutation> right_translations(const LoopTable& t) {
  int n = t.order();
  std::vector<Permutation> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = t.at(x, a);
    out.push_back(Permutation(std::move(img)));
  }
  return out;
}

inline std::vector<Permutation> left_translations(const LoopTable& t) {
  int n = t.order();
  std::vector<Permutation> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = t.at(a, x);
    out.push_back(Permutation(std::move(img)));
  }
  return out;
}

namespace detail {

inline bool conjugation_closed(const std::vector<Permutation>& translations) {
  std::unordered_set<Permutation, PermHash> set(translations.begin(),
                                                translations.end());
  for (const auto& b : translations)
    for (const auto& a : translations)
      if (!set.count(a.conjugated_by(b))) return false;
  return true;
}

}  // namespace detail

/// Right translations closed under conjugation by themselves.
inline bool is_rcc(const LoopTable& t) {
  return detail::conjugation_closed(right_translations(t));
}

/// Mirror predicate computed from the left translations directly.
inline bool is_lcc(const LoopTable& t) {
  return detail::conjugation_closed(left_translations(t));
}

inline bool is_associative(const LoopTable& t) {
  int n = t.order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t.at(t.at(i, j), k) != t.at(i, t.at(j, k))) return false;
  return true;
}

inline bool is_commutative(const LoopTable& t) {
  int n = t.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t.at(i, j) != t.at(j, i)) return false;
  return true;
}

inline LoopTable opposite(const LoopTable& t) {
  int n = t.order();
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = t.at(j, i);
  return LoopTable::from_rows(rows);
}

/// Loop isomorphism search: a bijection phi with phi(0) = 0 and
/// phi(x*y) = phi(x)*phi(y).  Assigns images to successive elements that
/// extend the generated subloop, propagating forced products after each
/// choice.  Returns a witness bijection or nullopt.
inline std::optional<std::vector<int>> isomorphism(const LoopTable& lhs,
                                                   const LoopTable& rhs) {
  int n = lhs.order();
  if (rhs.order() != n) return std::nullopt;

  auto invariant = [](const LoopTable& t) {
    auto rt = right_translations(t);
    auto lt = left_translations(t);
    std::vector<std::pair<long long, long long>> inv(t.order());
    for (int x = 0; x < t.order(); ++x)
      inv[x] = {rt[x].order(), lt[x].order()};
    return inv;
  };
  auto inv1 = invariant(lhs), inv2 = invariant(rhs);
  {
    auto s1 = inv1, s2 = inv2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return std::nullopt;
  }

  std::vector<int> phi(n, -1);
  std::vector<char> used(n, 0);

  // Assigns phi[x] = y, then derives every product forced by the partial
  // map.  Returns the cells set (for undo), or nullopt on contradiction.
  auto propagate = [&](int x0, int y0) -> std::optional<std::vector<int>> {
    std::vector<int> trail;
    auto assign = [&](int x, int y) -> bool {
      if (phi[x] >= 0) return phi[x] == y;
      if (used[y] || inv1[x] != inv2[y]) return false;
      phi[x] = y;
      used[y] = 1;
      trail.push_back(x);
      return true;
    };
    auto undo = [&]() {
      for (int x : trail) {
        used[phi[x]] = 0;
        phi[x] = -1;
      }
    };
    if (!assign(x0, y0)) {
      undo();
      return std::nullopt;
    }
    for (std::size_t head = 0; head < trail.size(); ++head) {
      int x = trail[head];
      for (int z = 0; z < n; ++z) {
        if (phi[z] < 0) continue;
        if (!assign(lhs.at(x, z), rhs.at(phi[x], phi[z])) ||
            !assign(lhs.at(z, x), rhs.at(phi[z], phi[x]))) {
          undo();
          return std::nullopt;
        }
      }
    }
    return trail;
  };

  auto search = [&](auto&& self) -> bool {
    int x = -1;
    for (int i = 0; i < n; ++i)
      if (phi[i] < 0) {
        x = i;
        break;
      }
    if (x < 0) return true;
    for (int y = 0; y < n; ++y) {
      if (used[y] || inv1[x] != inv2[y]) continue;
      auto trail = propagate(x, y);
      if (!trail) continue;
      if (self(self)) return true;
      for (int t : *trail) {
        used[phi[t]] = 0;
        phi[t] = -1;
      }
    }
    return false;
  };

  auto seed = propagate(0, 0);
  if (!seed) return std::nullopt;
  if (!search(search)) return std::nullopt;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (phi[lhs.at(i, j)] != rhs.at(phi[i], phi[j]))
        throw InternalError("isomorphism witness failed recheck");
  return phi;
}

inline bool are_isomorphic(const LoopTable& lhs, const LoopTable& rhs) {
  return isomorphism(lhs, rhs).has_value();
}

/// Conjugation-invariant summary used to pre-filter isomorphism tests.
/// Commuting pairs and associating triples are counted over ordered tuples.
struct Fingerprint {
  int order = 0;
  std::vector<long long> translation_orders;  // sorted
  long long mult_group_order = 0;
  std::vector<long long> envelope_class_sizes;  // sorted
  long long commuting_pairs = 0;
  long long associating_triples = 0;

  std::string key() const {
    std::ostringstream out;
    out << order << '|';
    for (auto v : translation_orders) out << v << ',';
    out << '|' << mult_group_order << '|';
    for (auto v : envelope_class_sizes) out << v << ',';
    out << '|' << commuting_pairs << '|' << associating_triples;
    return out.str();
  }

  bool operator==(const Fingerprint&) const = default;
};

inline Fingerprint fingerprint(const LoopTable& t, long long cap = 0) {
  Fingerprint fp;
  int n = t.order();
  fp.order = n;
  auto rt = right_translations(t);
  for (const auto& r : rt) fp.translation_orders.push_back(r.order());
  std::sort(fp.translation_orders.begin(), fp.translation_orders.end());
  GroupView g = closure(rt, cap);
  fp.mult_group_order = g.order();
  for (const auto& cls : conjugacy_classes(g))
    fp.envelope_class_sizes.push_back(static_cast<long long>(cls.size()));
  std::sort(fp.envelope_class_sizes.begin(), fp.envelope_class_sizes.end());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (t.at(i, j) == t.at(j, i)) ++fp.commuting_pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t.at(t.at(i, j), k) == t.at(i, t.at(j, k)))
          ++fp.associating_triples;
  return fp;
}

struct LoopClass {
  LoopTable representative;
  Fingerprint fp;
  int first_found = 0;        // index into the classified input
  std::vector<int> members;   // input indices in this class
};

/// Buckets by fingerprint, resolves buckets by isomorphism.  The first table
/// encountered in input order represents its class; output is sorted by
/// (order, fingerprint key, first-found index).
inline std::vector<LoopClass> classify(const std::vector<LoopTable>& tables) {
  std::vector<LoopClass> classes;
  std::unordered_map<std::string, std::vector<int>> buckets;  // key -> class ids
  for (int i = 0; i < static_cast<int>(tables.size()); ++i) {
    Fingerprint fp = fingerprint(tables[i]);
    auto& bucket = buckets[fp.key()];
    bool placed = false;
    for (int cid : bucket) {
      if (are_isomorphic(classes[cid].representative, tables[i])) {
        classes[cid].members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      LoopClass cls;
      cls.representative = tables[i];
      cls.fp = std::move(fp);
      cls.first_found = i;
      cls.members = {i};
      bucket.push_back(static_cast<int>(classes.size()));
      classes.push_back(std::move(cls));
    }
  }
  std::sort(classes.begin(), classes.end(),
            [](const LoopClass& a, const LoopClass& b) {
              if (a.fp.order != b.fp.order) return a.fp.order < b.fp.order;
              auto ka = a.fp.key(), kb = b.fp.key();
              if (ka != kb) return ka < kb;
              return a.first_found < b.first_found;
            });
  return classes;
}

}  // namespace rccloop
