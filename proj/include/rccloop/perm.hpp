#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rccloop/errors.hpp"

namespace rccloop {

/// Permutation of the points {0..degree-1}.
///
/// Permutations act on the right of points: x^(g*h) = (x^g)^h, so the
/// product g*h applies g first.  Conjugation follows the same convention,
/// g conjugated by x is x^-1 * g * x.
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    if (!is_bijection(images_))
      throw InvalidArgument("image list is not a bijection");
  }

  static Permutation identity(int degree) {
    std::vector<int> img(degree);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(unchecked{}, std::move(img));
  }

  /// Builds a permutation from disjoint cycles given as 0-based point lists.
  static Permutation from_cycles(int degree,
                                 const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(degree);
    std::iota(img.begin(), img.end(), 0);
    for (const auto& cyc : cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        int from = cyc[i];
        int to = cyc[(i + 1) % cyc.size()];
        if (from < 0 || from >= degree || to < 0 || to >= degree)
          throw InvalidArgument("cycle point out of range");
        img[from] = to;
      }
    }
    Permutation p(std::move(img));
    return p;
  }

  int degree() const { return static_cast<int>(images_.size()); }

  /// Image of a point under this permutation.
  int operator()(int x) const { return images_[x]; }

  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> img(images_.size());
    for (int i = 0; i < degree(); ++i) img[images_[i]] = i;
    return Permutation(unchecked{}, std::move(img));
  }

  /// x^-1 * this * x.
  Permutation conjugated_by(const Permutation& x) const {
    std::vector<int> img(images_.size());
    for (int i = 0; i < degree(); ++i) img[x.images_[i]] = x.images_[images_[i]];
    return Permutation(unchecked{}, std::move(img));
  }

  Permutation power(long long e) const {
    int n = degree();
    Permutation base = *this;
    if (e < 0) {
      base = inverse();
      e = -e;
    }
    Permutation acc = identity(n);
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  /// Multiplicative order (lcm of cycle lengths).
  long long order() const {
    long long result = 1;
    std::vector<char> seen(images_.size(), 0);
    for (int i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      long long len = 0;
      for (int j = i; !seen[j]; j = images_[j]) {
        seen[j] = 1;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  /// Nontrivial cycles, each starting at its smallest point, sorted by that
  /// point.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> result;
    std::vector<char> seen(images_.size(), 0);
    for (int i = 0; i < degree(); ++i) {
      if (seen[i] || images_[i] == i) {
        seen[i] = 1;
        continue;
      }
      std::vector<int> cyc;
      for (int j = i; !seen[j]; j = images_[j]) {
        seen[j] = 1;
        cyc.push_back(j);
      }
      result.push_back(std::move(cyc));
    }
    return result;
  }

  /// 1-based cycle notation, "()" for the identity.
  std::string cycle_string() const {
    auto cycs = cycles();
    if (cycs.empty()) return "()";
    std::ostringstream out;
    for (const auto& cyc : cycs) {
      out << '(';
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        if (i) out << ' ';
        out << cyc[i] + 1;
      }
      out << ')';
    }
    return out.str();
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<int> img(a.images_.size());
    for (int i = 0; i < a.degree(); ++i) img[i] = b.images_[a.images_[i]];
    return Permutation(unchecked{}, std::move(img));
  }

  bool operator==(const Permutation& other) const = default;
  auto operator<=>(const Permutation& other) const = default;

private:
  struct unchecked {};
  Permutation(unchecked, std::vector<int> images) : images_(std::move(images)) {}

  static bool is_bijection(const std::vector<int>& img) {
    std::vector<char> seen(img.size(), 0);
    for (int v : img) {
      if (v < 0 || v >= static_cast<int>(img.size()) || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  }

  std::vector<int> images_;
};

struct PermHash {
  std::size_t operator()(const Permutation& p) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : p.images()) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace rccloop
