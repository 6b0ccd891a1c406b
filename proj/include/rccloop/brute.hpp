#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <thread>
#include <vector>

#include "rccloop/constructions.hpp"
#include "rccloop/errors.hpp"
#include "rccloop/loop.hpp"

namespace rccloop {

struct SearchConfig {
  int order = 0;
  bool rcc_only = false;
  double time_budget_s = 3600.0;
  int parallel_width = 1;
};

struct BruteResult {
  std::vector<LoopTable> survivors;
  std::vector<LoopClass> classes;
  long long nodes = 0;
};

namespace detail {

/// Backtracking state over one normalized Cayley table.  Cells are visited
/// in row-major order, values ascending.  With rcc_only, every pair of
/// fully determined columns x, y forces column c(x,y) pointwise through
/// R_x R_y = R_y R_c; only complete columns take part, the final filter
/// guarantees completeness.
class TableSearch {
public:
  TableSearch(int n, bool rcc_only, std::atomic<bool>& stop,
              std::chrono::steady_clock::time_point deadline)
      : n_(n), rcc_only_(rcc_only), stop_(stop), deadline_(deadline),
        grid_(static_cast<std::size_t>(n) * n, -1), row_mask_(n, 0),
        col_mask_(n, 0), col_filled_(n, 0), col_complete_(n, 0) {
    for (int j = 0; j < n_; ++j) set_cell(0, j);
    for (int i = 1; i < n_; ++i) set_cell(i, 0);
    full_ = (1u << n_) - 1;
  }

  /// Runs the search from the first free cell, invoking `sink` on every
  /// completed table.  `stop_depth` < 0 searches to the leaves; otherwise
  /// the search stops after filling rows 1..stop_depth and hands the grid
  /// to `sink` as a prefix.
  template <typename Sink>
  void run(int stop_depth, Sink&& sink) {
    dfs(1, 1, stop_depth, sink);
  }

  /// Seeds the grid from a partial prefix (rows 1..depth filled).
  void load_prefix(const std::vector<std::int8_t>& prefix_grid, int depth) {
    for (int i = 1; i <= depth; ++i)
      for (int j = 1; j < n_; ++j) {
        int v = prefix_grid[static_cast<std::size_t>(i) * n_ + j];
        grid_[static_cast<std::size_t>(i) * n_ + j] =
            static_cast<std::int8_t>(v);
        row_mask_[i] |= 1u << v;
        col_mask_[j] |= 1u << v;
        ++col_filled_[j];
      }
  }

  const std::vector<std::int8_t>& grid() const { return grid_; }
  long long nodes() const { return nodes_; }

private:
  int at(int i, int j) const { return grid_[static_cast<std::size_t>(i) * n_ + j]; }

  void set_cell(int i, int j) {
    // Prefilled normalization cells: row 0 and column 0 are the identity.
    int v = (i == 0) ? j : i;
    grid_[static_cast<std::size_t>(i) * n_ + j] = static_cast<std::int8_t>(v);
    row_mask_[i] |= 1u << v;
    col_mask_[j] |= 1u << v;
    ++col_filled_[j];
  }

  bool assign(int i, int j, int v, std::vector<int>& trail,
              std::vector<int>& completed) {
    std::uint32_t bit = 1u << v;
    if ((row_mask_[i] & bit) || (col_mask_[j] & bit)) return false;
    grid_[static_cast<std::size_t>(i) * n_ + j] = static_cast<std::int8_t>(v);
    row_mask_[i] |= bit;
    col_mask_[j] |= bit;
    trail.push_back(i * n_ + j);
    if (++col_filled_[j] == n_) {
      col_complete_[j] = 1;
      completed.push_back(j);
    }
    return true;
  }

  void undo(const std::vector<int>& trail) {
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
      int i = *it / n_, j = *it % n_;
      int v = at(i, j);
      grid_[static_cast<std::size_t>(i) * n_ + j] = -1;
      row_mask_[i] &= ~(1u << v);
      col_mask_[j] &= ~(1u << v);
      if (col_filled_[j]-- == n_) col_complete_[j] = 0;
    }
  }

  /// Propagates R_x R_y = R_y R_{c(x,y)} for every ordered pair of complete
  /// columns involving a newly completed one.  Sound: only forced values are
  /// written.
  bool propagate(std::vector<int>& trail, std::vector<int>& completed) {
    for (std::size_t head = 0; head < completed.size(); ++head) {
      int fresh = completed[head];
      for (int other = 1; other < n_; ++other) {
        if (!col_complete_[other]) continue;
        if (!propagate_pair(fresh, other, trail, completed)) return false;
        if (other != fresh &&
            !propagate_pair(other, fresh, trail, completed))
          return false;
      }
    }
    return true;
  }

  bool propagate_pair(int x, int y, std::vector<int>& trail,
                      std::vector<int>& completed) {
    int zb = -1;  // solution of z*y = 0
    for (int z = 0; z < n_; ++z)
      if (at(z, y) == 0) {
        zb = z;
        break;
      }
    int c = at(at(zb, x), y);
    for (int z = 0; z < n_; ++z) {
      int lhs = at(at(z, x), y);
      int w = at(z, y);
      int cur = at(w, c);
      if (cur >= 0) {
        if (cur != lhs) return false;
      } else {
        if (!assign(w, c, lhs, trail, completed)) return false;
      }
    }
    return true;
  }

  template <typename Sink>
  bool dfs(int i, int j, int stop_depth, Sink&& sink) {
    while (i < n_ && at(i, j) >= 0) {
      if (++j == n_) {
        j = 1;
        ++i;
        if (stop_depth > 0 && i > stop_depth) {
          sink(grid_);
          return true;
        }
      }
    }
    if (i == n_) {
      sink(grid_);
      return true;
    }
    if ((++nodes_ & 0xfff) == 0) {
      if (stop_.load(std::memory_order_relaxed)) return false;
      if (std::chrono::steady_clock::now() > deadline_) {
        stop_.store(true, std::memory_order_relaxed);
        return false;
      }
    }
    std::uint32_t free_bits = full_ & ~(row_mask_[i] | col_mask_[j]);
    while (free_bits) {
      int v = __builtin_ctz(free_bits);
      free_bits &= free_bits - 1;
      std::vector<int> trail, completed;
      if (assign(i, j, v, trail, completed)) {
        bool ok = !rcc_only_ || propagate(trail, completed);
        if (ok && !dfs(i, j, stop_depth, sink)) {
          undo(trail);
          return false;
        }
      }
      undo(trail);
    }
    return true;
  }

  int n_;
  bool rcc_only_;
  std::atomic<bool>& stop_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::int8_t> grid_;
  std::vector<std::uint32_t> row_mask_, col_mask_;
  std::vector<int> col_filled_;
  std::vector<char> col_complete_;
  std::uint32_t full_ = 0;
  long long nodes_ = 0;
};

inline LoopTable table_from_grid(const std::vector<std::int8_t>& grid, int n) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rows[i][j] = grid[static_cast<std::size_t>(i) * n + j];
  return LoopTable::from_rows(rows);
}

}  // namespace detail

/// Exhaustive enumeration of normalized Cayley tables of the configured
/// order, optionally restricted to tables whose right translations are
/// conjugation closed.  The search tree splits at a fixed depth of two rows
/// into independent subtrees; survivors are merged in prefix order, so the
/// result does not depend on the thread count.
inline BruteResult enumerate_loops(const SearchConfig& cfg) {
  int n = cfg.order;
  if (n < 1) throw InvalidArgument("enumerate_loops: order must be positive");
  if (!cfg.rcc_only && n > 7)
    throw InvalidArgument("enumerate_loops: unconstrained search capped at 7");
  if (cfg.rcc_only && n > 10)
    throw InvalidArgument("enumerate_loops: constrained search capped at 10");

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.time_budget_s));
  std::atomic<bool> stop{false};

  BruteResult result;
  if (n <= 2) {
    // Order 1 and 2 have a single normalized table each.
    std::vector<std::vector<int>> rows;
    if (n == 1)
      rows = {{0}};
    else
      rows = {{0, 1}, {1, 0}};
    result.survivors.push_back(LoopTable::from_rows(rows));
    result.classes = classify(result.survivors);
    return result;
  }

  int split_depth = std::min(2, n - 1);
  std::vector<std::vector<std::int8_t>> prefixes;
  {
    detail::TableSearch seeder(n, false, stop, deadline);
    seeder.run(split_depth, [&](const std::vector<std::int8_t>& grid) {
      prefixes.push_back(grid);
    });
    result.nodes += seeder.nodes();
  }
  if (stop.load()) throw BudgetExceeded("enumerate_loops: budget exhausted");

  int width = std::max(1, cfg.parallel_width);
  std::vector<std::vector<LoopTable>> found(prefixes.size());
  std::atomic<std::size_t> next{0};
  std::atomic<long long> nodes{0};
  auto worker = [&]() {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= prefixes.size() || stop.load(std::memory_order_relaxed))
        return;
      detail::TableSearch search(n, cfg.rcc_only, stop, deadline);
      search.load_prefix(prefixes[idx], split_depth);
      search.run(-1, [&](const std::vector<std::int8_t>& grid) {
        LoopTable t = detail::table_from_grid(grid, n);
        if (cfg.rcc_only && !is_rcc(t)) return;  // final soundness filter
        found[idx].push_back(std::move(t));
      });
      nodes.fetch_add(search.nodes(), std::memory_order_relaxed);
    }
  };
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.nodes += nodes.load();
  if (stop.load()) throw BudgetExceeded("enumerate_loops: budget exhausted");

  for (auto& bucket : found)
    for (auto& t : bucket) result.survivors.push_back(std::move(t));
  result.classes = classify(result.survivors);
  return result;
}

struct CrossCheck2pReport {
  int p = 0;
  bool budget_exceeded = false;
  long long brute_classes = 0;
  long long constructed_classes = 0;
  bool bijection_ok = false;
  std::vector<std::pair<int, int>> matching;  // (brute class, inventory entry)
};

/// Matches the brute-force inventory at order 2p class-for-class against the
/// constructed one.  A perfect bijection is required; running out of budget
/// reports that instead of a verdict.
inline CrossCheck2pReport cross_check_2p(int p, double budget_s = 3600.0,
                                         int parallel_width = 1) {
  if (p != 3 && p != 5)
    throw InvalidArgument("cross_check_2p: p must be 3 or 5");
  CrossCheck2pReport report;
  report.p = p;

  IsoInventory inv = enumerate_2p(p, VerifyMode::counts_only);
  report.constructed_classes = static_cast<long long>(inv.entries.size());

  BruteResult brute;
  try {
    SearchConfig cfg;
    cfg.order = 2 * p;
    cfg.rcc_only = true;
    cfg.time_budget_s = budget_s;
    cfg.parallel_width = parallel_width;
    brute = enumerate_loops(cfg);
  } catch (const BudgetExceeded&) {
    report.budget_exceeded = true;
    return report;
  }
  report.brute_classes = static_cast<long long>(brute.classes.size());

  if (report.brute_classes != report.constructed_classes)
    throw MismatchFound("cross_check_2p: class counts differ");
  std::vector<char> hit(inv.entries.size(), 0);
  for (int b = 0; b < static_cast<int>(brute.classes.size()); ++b) {
    int match = -1;
    for (int e = 0; e < static_cast<int>(inv.entries.size()); ++e) {
      if (hit[e]) continue;
      if (are_isomorphic(brute.classes[b].representative,
                         inv.entries[e].table)) {
        match = e;
        break;
      }
    }
    if (match < 0)
      throw MismatchFound("cross_check_2p: brute class has no partner");
    hit[match] = 1;
    report.matching.emplace_back(b, match);
  }
  report.bijection_ok = true;
  return report;
}

}  // namespace rccloop
