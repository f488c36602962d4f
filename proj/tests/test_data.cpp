#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "bdn/data.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using bdn::Dataset;
using bdn::SyntheticKind;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("bdn_data_test_" + name);
}

}  // namespace

TEST_CASE("synthetic median interpolates the spline knots") {
  CHECK(bdn::synthetic_median(-1.0) == doctest::Approx(0.0));
  CHECK(bdn::synthetic_median(-0.5) == doctest::Approx(1.0));
  CHECK(bdn::synthetic_median(0.0) == doctest::Approx(-1.0));
  CHECK(bdn::synthetic_median(0.5) == doctest::Approx(1.0));
  CHECK(bdn::synthetic_median(1.0) == doctest::Approx(0.0));
  CHECK(bdn::synthetic_median(-0.75) == doctest::Approx(0.5));
  CHECK(bdn::synthetic_median(0.25) == doctest::Approx(0.0));
}

TEST_CASE("kind names round-trip") {
  for (auto kind : {SyntheticKind::heteroscedastic, SyntheticKind::skewed,
                    SyntheticKind::multimodal}) {
    CHECK(bdn::synthetic_kind_from_name(bdn::to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(bdn::synthetic_kind_from_name("sinusoidal"), std::invalid_argument);
}

TEST_CASE("generation is deterministic in the seed") {
  const Dataset a = bdn::gen_synthetic(SyntheticKind::skewed, 100, 7);
  const Dataset b = bdn::gen_synthetic(SyntheticKind::skewed, 100, 7);
  const Dataset c = bdn::gen_synthetic(SyntheticKind::skewed, 100, 8);
  CHECK((a.x.array() == b.x.array()).all());
  CHECK((a.y.array() == b.y.array()).all());
  CHECK((a.x.array() != c.x.array()).any());
  CHECK(a.n() == 100);
  CHECK(a.x.cols() == 1);
  CHECK(a.y.cols() == 1);
  for (int i = 0; i < a.n(); ++i) {
    CHECK(a.x(i, 0) >= -1.0);
    CHECK(a.x(i, 0) <= 1.0);
  }
}

TEST_CASE("probability integral transform of generated targets is uniform") {
  // If Q(x, .) is the true inverse CDF of y | x, then the p solving
  // Q(x, p) = y is U(0,1). Inverts Q by bisection, so this also exercises
  // monotonicity of the quantile function.
  for (auto kind : {SyntheticKind::heteroscedastic, SyntheticKind::skewed,
                    SyntheticKind::multimodal}) {
    CAPTURE(bdn::to_string(kind));
    const Dataset ds = bdn::gen_synthetic(kind, 4000, 11);
    REQUIRE(static_cast<bool>(ds.quantile));
    std::vector<double> pit(static_cast<std::size_t>(ds.n()));
    for (int i = 0; i < ds.n(); ++i) {
      double lo = 1e-9, hi = 1.0 - 1e-9;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ds.quantile(ds.x(i, 0), mid) < ds.y(i, 0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      pit[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
    }
    const double d = testsup::ks_statistic(pit, [](double t) { return t; });
    CHECK(testsup::ks_pvalue(d, pit.size()) > 1e-3);
  }
}

TEST_CASE("standalone quantile handle matches the dataset's") {
  const auto q = bdn::synthetic_quantile(SyntheticKind::multimodal);
  const Dataset ds = bdn::gen_synthetic(SyntheticKind::multimodal, 10, 3);
  for (double x : {-0.8, -0.1, 0.4, 0.9}) {
    for (double p : {0.05, 0.5, 0.95}) {
      CHECK(q(x, p) == doctest::Approx(ds.quantile(x, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("quantiles are monotone in p and the median matches the spline") {
  for (auto kind : {SyntheticKind::heteroscedastic, SyntheticKind::skewed,
                    SyntheticKind::multimodal}) {
    const auto q = bdn::synthetic_quantile(kind);
    for (double x : {-0.9, -0.3, 0.0, 0.3, 0.9}) {
      double prev = q(x, 0.001);
      for (double p = 0.01; p < 1.0; p += 0.01) {
        const double cur = q(x, p);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
    if (kind != SyntheticKind::multimodal) {
      // Symmetric/oriented noise keeps the median on the spline.
      CHECK(q(0.3, 0.5) == doctest::Approx(bdn::synthetic_median(0.3)).epsilon(1e-6));
    }
  }
}

TEST_CASE("csv round trip preserves values and names") {
  Dataset ds = bdn::gen_synthetic(SyntheticKind::heteroscedastic, 37, 13);
  const auto path = temp_file("roundtrip.csv");
  bdn::save_csv(ds, path.string());
  const Dataset back = bdn::load_csv(path.string(), {1}, true);
  CHECK(back.n() == ds.n());
  CHECK(back.x_names == ds.x_names);
  CHECK(back.y_names == ds.y_names);
  CHECK((back.x.array() == ds.x.array()).all());
  CHECK((back.y.array() == ds.y.array()).all());
  fs::remove(path);
}

TEST_CASE("csv loader handles quoting, rejects bad rows, reports them") {
  const auto path = temp_file("messy.csv");
  {
    std::ofstream out(path);
    out << "\"feature, one\",target\n";
    out << "1.5,2.5\n";
    out << "oops,3.0\n";          // non-numeric
    out << "4.0,\n";              // missing cell
    out << "\"-2.0\",\"7.25\"\n"; // quoted numerics
    out << "1.0,2.0,3.0\n";       // wrong arity
  }
  bdn::CsvLoadReport report;
  const Dataset ds = bdn::load_csv(path.string(), {1}, true, &report);
  CHECK(ds.n() == 2);
  CHECK(ds.x_names[0] == "feature, one");
  CHECK(ds.x(1, 0) == -2.0);
  CHECK(ds.y(1, 0) == 7.25);
  CHECK(report.rejected_rows == 3);
  CHECK(report.rejected_line_numbers == std::vector<int>{3, 4, 6});
  CHECK_THROWS(bdn::load_csv(path.string(), {5}, true));
  CHECK_THROWS(bdn::load_csv("/nonexistent/file.csv", {0}, true));
  fs::remove(path);
}

TEST_CASE("headerless csv gets synthetic column names") {
  const auto path = temp_file("nohdr.csv");
  {
    std::ofstream out(path);
    out << "1,2\n3,4\n";
  }
  const Dataset ds = bdn::load_csv(path.string(), {1}, false);
  CHECK(ds.n() == 2);
  CHECK(ds.x_names[0] == "col0");
  fs::remove(path);
}

TEST_CASE("standardize centers and scales, and inverts exactly") {
  Dataset ds = bdn::gen_synthetic(SyntheticKind::skewed, 200, 17);
  ds.x.conservativeResize(Eigen::NoChange, 2);
  ds.x.col(1).setConstant(5.0);  // constant column
  ds.x_names.push_back("const");
  const Dataset z = bdn::standardize(ds);
  REQUIRE(static_cast<bool>(z.standardization));
  CHECK(z.x.col(0).mean() == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  const double sd = std::sqrt(z.x.col(0).squaredNorm() / (z.n() - 1));
  CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(z.standardization->x_scale(1) == 1.0);  // constant column untouched
  CHECK((z.x.col(1).array() == 0.0).all());

  const Dataset z2 = bdn::apply_standardization(*z.standardization, ds);
  CHECK((z2.x.array() == z.x.array()).all());
  CHECK((z2.y.array() == z.y.array()).all());

  const Eigen::MatrixXd y_back = bdn::destandardize_predictions(*z.standardization, z.y);
  CHECK((y_back - ds.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("split is disjoint, exhaustive, and seeded") {
  const Dataset ds = bdn::gen_synthetic(SyntheticKind::multimodal, 103, 19);
  bdn::SplitSpec spec;
  spec.train_fraction = 0.8;
  spec.seed = 5;
  auto [train, test] = bdn::split(ds, spec);
  CHECK(train.n() + test.n() == ds.n());
  CHECK(train.n() == 82);  // floor(0.8 * 103) = 82

  std::multiset<double> all, seen;
  for (int i = 0; i < ds.n(); ++i) all.insert(ds.y(i, 0));
  for (int i = 0; i < train.n(); ++i) seen.insert(train.y(i, 0));
  for (int i = 0; i < test.n(); ++i) seen.insert(test.y(i, 0));
  CHECK(all == seen);

  auto [train2, test2] = bdn::split(ds, spec);
  CHECK((train2.x.array() == train.x.array()).all());
  spec.replicate = 1;
  auto [train3, test3] = bdn::split(ds, spec);
  CHECK((train3.x.array() != train.x.array()).any());

  spec.train_fraction = 1.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
