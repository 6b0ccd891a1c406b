#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rccloop/errors.hpp"
#include "rccloop/field.hpp"
#include "rccloop/folder.hpp"
#include "rccloop/loop.hpp"

namespace rccloop {

/// The loop of order q^2 - 1 whose right multiplication group is GL(2,q):
/// H is the q(q-1) matrices [[a,0],[b,1]], Z the scalars, C a conjugacy
/// class of elements of order q^2 - 1, and T = C + Z.  The folder lives on
/// the abstract coset space H\G, realized as a permutation group.
struct GL2Folder {
  int q = 0;
  GL2Group matrices;
  std::vector<int> h_matrices;  // positions in matrices of H
  std::vector<int> c_matrices;  // positions of the chosen class C
  std::vector<int> z_matrices;  // positions of the scalars
  std::shared_ptr<const GroupView> view;  // coset action, degree q^2 - 1
  std::vector<int> subgroup;    // H as view indices
  std::vector<int> transversal; // T as view indices
  FolderReport report;
};

namespace detail {

/// Conjugacy class of the matrix at `start` inside the full matrix table.
inline std::vector<int> matrix_class(const GL2Group& g, int start) {
  const FieldContext& f = g.field;
  std::vector<char> in_cls(g.matrices.size(), 0);
  std::vector<int> cls{start};
  in_cls[start] = 1;
  for (const auto& x : g.matrices) {
    Matrix2 xi = mat_inverse(f, x);
    int c = g.index_of(mat_mul(f, mat_mul(f, xi, g.matrices[start]), x));
    if (!in_cls[c]) {
      in_cls[c] = 1;
      cls.push_back(c);
    }
  }
  std::sort(cls.begin(), cls.end());
  return cls;
}

/// Permutation induced on the right cosets of H by right multiplication.
struct GL2CosetSpace {
  std::vector<int> coset_of;   // matrix position -> coset id
  std::vector<int> reps;       // coset id -> matrix position
};

inline GL2CosetSpace gl2_cosets(const GL2Group& g,
                                const std::vector<int>& h_matrices) {
  GL2CosetSpace cs;
  cs.coset_of.assign(g.matrices.size(), -1);
  for (int m = 0; m < static_cast<int>(g.matrices.size()); ++m) {
    if (cs.coset_of[m] >= 0) continue;
    int id = static_cast<int>(cs.reps.size());
    cs.reps.push_back(m);
    for (int h : h_matrices)
      cs.coset_of[g.index_of(
          mat_mul(g.field, g.matrices[h], g.matrices[m]))] = id;
  }
  return cs;
}

inline Permutation coset_perm(const GL2Group& g, const GL2CosetSpace& cs,
                              int matrix_pos) {
  std::vector<int> img(cs.reps.size());
  for (int c = 0; c < static_cast<int>(cs.reps.size()); ++c)
    img[c] = cs.coset_of[g.index_of(mat_mul(
        g.field, g.matrices[cs.reps[c]], g.matrices[matrix_pos]))];
  return Permutation(std::move(img));
}

}  // namespace detail

/// Builds and validates the folder for 3 <= q <= 9.  The class C is the one
/// through the first matrix of multiplicative order q^2 - 1 in enumeration
/// order.
inline GL2Folder gl2_folder(int q, int max_q = 9) {
  if (q <= 2) throw QTooSmall("gl2_folder: q must exceed 2");
  if (q > max_q) throw QTooLarge("gl2_folder: q exceeds bound");
  GL2Folder out;
  out.q = q;
  out.matrices = gl2_group(q);
  const GL2Group& g = out.matrices;
  const FieldContext& f = g.field;

  for (int a = 0; a < q; ++a) {
    if (f.is_zero(f.element(a))) continue;
    for (int b = 0; b < q; ++b)
      out.h_matrices.push_back(g.index_of(
          Matrix2{{f.element(a), f.zero(), f.element(b), f.one()}}));
  }
  std::sort(out.h_matrices.begin(), out.h_matrices.end());

  int singer = g.index_of(singer_element(g));
  out.c_matrices = detail::matrix_class(g, singer);
  for (int a = 1; a < q; ++a)
    out.z_matrices.push_back(g.index_of(
        Matrix2{{f.element(a), f.zero(), f.zero(), f.element(a)}}));
  std::sort(out.z_matrices.begin(), out.z_matrices.end());

  if (static_cast<long long>(out.c_matrices.size()) != 1LL * q * (q - 1))
    throw InternalError("gl2_folder: unexpected class size");

  std::vector<int> t_matrices = out.c_matrices;
  t_matrices.insert(t_matrices.end(), out.z_matrices.begin(),
                    out.z_matrices.end());
  std::sort(t_matrices.begin(), t_matrices.end());
  t_matrices.erase(std::unique(t_matrices.begin(), t_matrices.end()),
                   t_matrices.end());
  if (static_cast<long long>(t_matrices.size()) != 1LL * q * q - 1)
    throw InternalError("gl2_folder: class and scalars overlap");

  detail::GL2CosetSpace cs = detail::gl2_cosets(g, out.h_matrices);
  std::vector<Permutation> t_perms;
  t_perms.reserve(t_matrices.size());
  for (int m : t_matrices) t_perms.push_back(detail::coset_perm(g, cs, m));
  auto view = std::make_shared<GroupView>(closure(t_perms));
  long long expected = (1LL * q * q - 1) * (1LL * q * q - q);
  if (view->order() != expected)
    throw InternalError("gl2_folder: transversal does not generate GL(2,q)");

  for (int m : out.h_matrices)
    out.subgroup.push_back(view->index_of(detail::coset_perm(g, cs, m)));
  std::sort(out.subgroup.begin(), out.subgroup.end());
  for (const auto& tp : t_perms)
    out.transversal.push_back(view->index_of(tp));
  std::sort(out.transversal.begin(), out.transversal.end());
  out.transversal.erase(
      std::unique(out.transversal.begin(), out.transversal.end()),
      out.transversal.end());
  if (out.transversal.size() != t_perms.size())
    throw InternalError("gl2_folder: transversal members collide");

  out.view = view;
  out.report = validate_folder(*view, out.subgroup, out.transversal);
  if (!out.report.is_folder || !out.report.is_rcc || !out.report.is_faithful)
    throw InternalError("gl2_folder: folder validation failed");
  return out;
}

struct GL2Report {
  int q = 0;
  LoopTable table;
  long long group_order = 0;
  bool soluble = false;
  bool rcc = false;
  bool lcc = false;
  long long envelope_order = 0;
  bool envelope_matches = false;
  // Observation only: whether a second class of order-(q^2-1) elements
  // yields an isomorphic loop.  Not part of any assertion.
  std::optional<bool> alternative_class_isomorphic;
};

/// Builds the loop, then recomputes its envelope from the table alone and
/// compares it with the original coset action under the coset relabeling.
inline GL2Report gl2_loop_report(int q, bool probe_alternative_class = false) {
  GL2Folder folder = gl2_folder(q);
  GL2Report report;
  report.q = q;
  report.table = loop_from_folder(*folder.view, folder.subgroup,
                                  folder.transversal);
  report.group_order = folder.view->order();
  report.soluble = is_soluble(*folder.view);
  report.rcc = is_rcc(report.table);
  report.lcc = is_lcc(report.table);

  LoopFolder env = envelope_of_loop(report.table);
  report.envelope_order = env.group->order();

  // Conjugating the envelope through loop element -> t_i image of a base
  // point stabilized exactly by H must reproduce the coset action.
  report.envelope_matches =
      report.envelope_order == report.group_order &&
      permutation_equivalent(*env.group, *folder.view, folder.subgroup,
                             folder.transversal);

  if (probe_alternative_class) {
    const GL2Group& g = folder.matrices;
    long long target = 1LL * q * q - 1;
    std::vector<char> in_c(g.matrices.size(), 0);
    for (int m : folder.c_matrices) in_c[m] = 1;
    for (int m = 0; m < static_cast<int>(g.matrices.size()); ++m) {
      if (in_c[m] || mat_order(g.field, g.matrices[m]) != target) continue;
      auto cls = detail::matrix_class(g, m);
      std::vector<int> t2 = cls;
      t2.insert(t2.end(), folder.z_matrices.begin(), folder.z_matrices.end());
      std::sort(t2.begin(), t2.end());
      detail::GL2CosetSpace cs = detail::gl2_cosets(g, folder.h_matrices);
      std::vector<Permutation> t2_perms;
      for (int mm : t2) t2_perms.push_back(detail::coset_perm(g, cs, mm));
      auto view2 = std::make_shared<GroupView>(closure(t2_perms));
      std::vector<int> h2, tt2;
      for (int hm : folder.h_matrices)
        h2.push_back(view2->index_of(detail::coset_perm(g, cs, hm)));
      std::sort(h2.begin(), h2.end());
      for (const auto& tp : t2_perms) tt2.push_back(view2->index_of(tp));
      std::sort(tt2.begin(), tt2.end());
      LoopTable alt = loop_from_folder(*view2, h2, tt2);
      report.alternative_class_isomorphic = are_isomorphic(report.table, alt);
      break;
    }
  }
  return report;
}

}  // namespace rccloop
