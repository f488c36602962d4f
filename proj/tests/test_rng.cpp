#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "bdn/rng.hpp"
#include "support.hpp"

TEST_CASE("identical construction reproduces the sequence") {
  bdn::RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and stream ids give different sequences") {
  bdn::RngStream a(42, 0), b(43, 0), c(42, 1);
  bool differ_ab = false, differ_ac = false;
  for (int i = 0; i < 16; ++i) {
    const auto va = a.next_u64();
    differ_ab |= va != b.next_u64();
    differ_ac |= va != c.next_u64();
  }
  CHECK(differ_ab);
  CHECK(differ_ac);
}

TEST_CASE("fork is independent of the parent's position") {
  bdn::RngStream a(9, 1), b(9, 1);
  for (int i = 0; i < 50; ++i) (void)b.next_u64();  // advance b only
  bdn::RngStream fa = a.fork(3, 4), fb = b.fork(3, 4);
  for (int i = 0; i < 20; ++i) CHECK(fa.next_u64() == fb.next_u64());
}

TEST_CASE("forks with distinct labels do not collide") {
  bdn::RngStream root(123);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t a = 0; a < 30; ++a) {
    for (std::uint64_t b = 0; b < 30; ++b) {
      firsts.insert(root.fork(a, b).next_u64());
    }
  }
  CHECK(firsts.size() == 900);
}

TEST_CASE("uniform draws pass a KS test against U(0,1)") {
  bdn::RngStream rng(2024, 5);
  std::vector<double> xs(20000);
  for (auto& x : xs) {
    x = rng.next_uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  const double d = testsup::ks_statistic(xs, [](double t) { return t; });
  CHECK(testsup::ks_pvalue(d, xs.size()) > 1e-3);
}

TEST_CASE("normal draws have the right first moments and tails") {
  bdn::RngStream rng(7, 0);
  const int n = 50000;
  double sum = 0.0, sum2 = 0.0;
  int beyond2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sum2 += z * z;
    if (std::abs(z) > 2.0) ++beyond2;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02).scale(1.0));
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(static_cast<double>(beyond2) / n == doctest::Approx(0.0455).epsilon(0.15));
}

TEST_CASE("exponential draws have unit mean") {
  bdn::RngStream rng(7, 1);
  const int n = 50000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.next_exponential();
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.03));
}
