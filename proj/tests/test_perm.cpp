#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rccloop/perm.hpp"

using namespace rccloop;

namespace {

Permutation random_perm(int degree, std::mt19937& rng) {
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

}  // namespace

TEST_CASE("composition applies the left factor first") {
  Permutation a = Permutation::from_cycles(3, {{0, 1}});
  Permutation b = Permutation::from_cycles(3, {{1, 2}});
  Permutation ab = a * b;
  // 0 -> a -> 1 -> b -> 2
  CHECK(ab(0) == 2);
  CHECK(ab(1) == 0);
  CHECK(ab(2) == 1);
}

TEST_CASE("conjugation is x^-1 g x") {
  Permutation g = Permutation::from_cycles(4, {{0, 1}});
  Permutation x = Permutation::from_cycles(4, {{0, 2}});
  CHECK(g.conjugated_by(x) == x.inverse() * g * x);
  CHECK(g.conjugated_by(x) == Permutation::from_cycles(4, {{2, 1}}));
}

TEST_CASE("order and power") {
  Permutation c = Permutation::from_cycles(6, {{0, 1, 2}, {3, 4}});
  CHECK(c.order() == 6);
  CHECK(c.power(6).is_identity());
  CHECK(c.power(-1) == c.inverse());
  CHECK(Permutation::identity(5).order() == 1);
}

TEST_CASE("cycle notation is 1-based") {
  Permutation c = Permutation::from_cycles(5, {{0, 1, 2}});
  CHECK(c.cycle_string() == "(1 2 3)");
  CHECK(Permutation::identity(4).cycle_string() == "()");
  Permutation two = Permutation::from_cycles(5, {{0, 3}, {1, 4}});
  CHECK(two.cycle_string() == "(1 4)(2 5)");
}

TEST_CASE("image lists must be bijections") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 3}), InvalidArgument);
}

TEST_CASE("inverse round trip on random permutations") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    Permutation p = random_perm(8, rng);
    CHECK((p * p.inverse()).is_identity());
    CHECK(p.inverse().inverse() == p);
    Permutation q = random_perm(8, rng);
    CHECK((p * q).inverse() == q.inverse() * p.inverse());
  }
}
