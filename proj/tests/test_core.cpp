#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "test_util.hpp"

#include "absconv/ext_real.hpp"
#include "absconv/grid_fn.hpp"
#include "absconv/metric_space.hpp"

using absconv::ExtReal;
using absconv::Errc;

namespace {
const ExtReal kPlus = ExtReal::plus_inf();
const ExtReal kMinus = ExtReal::minus_inf();
ExtReal fin(double v) { return ExtReal::finite(v); }
}  // namespace

TEST_CASE("ext_sub_real follows the sup convention") {
  CHECK(absconv::ext_sub_real(3.0, fin(1.0)) == fin(2.0));
  CHECK(absconv::ext_sub_real(3.0, kPlus) == kMinus);
  CHECK(absconv::ext_sub_real(3.0, kMinus) == kPlus);
}

TEST_CASE("ExtReal arithmetic and order") {
  CHECK(kPlus + fin(2.0) == kPlus);
  CHECK(kMinus + fin(-7.0) == kMinus);
  CHECK(fin(1.5) + fin(2.25) == fin(3.75));
  CHECK(-kPlus == kMinus);
  CHECK(2.0 * kPlus == kPlus);
  CHECK(-2.0 * kPlus == kMinus);
  CHECK(0.0 * kPlus == fin(0.0));
  CHECK(0.0 * kMinus == fin(0.0));
  CHECK_ERRC(kPlus + kMinus, Errc::kUndefinedArithmetic);
  CHECK_ERRC(kMinus - kMinus, Errc::kUndefinedArithmetic);
  CHECK(kMinus < fin(-1e300));
  CHECK(fin(1e300) < kPlus);
  CHECK(std::max({fin(1), kMinus, fin(-4)}) == fin(1));
  CHECK(std::min({fin(1), kPlus, fin(-4)}) == fin(-4));
}

TEST_CASE("ExtReal construction rejects NaN") {
  CHECK_ERRC(ExtReal::finite(std::nan("")), Errc::kInvalidArgument);
  CHECK_ERRC(ExtReal::finite(std::numeric_limits<double>::infinity()), Errc::kInvalidArgument);
  CHECK_ERRC(ExtReal::from_double(std::nan("")), Errc::kInvalidArgument);
  CHECK(ExtReal::from_double(-std::numeric_limits<double>::infinity()) == kMinus);
  CHECK_ERRC(kPlus.value(), Errc::kInfiniteAtPoint);
  CHECK(fin(2.5).value() == 2.5);
  CHECK(absconv::to_string(kPlus) == "+inf");
  CHECK(absconv::to_string(kMinus) == "-inf");
  CHECK(absconv::to_string(fin(0.1)) == "0.1");
}

TEST_CASE("comparison is a total order on random extended reals") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(-3, 3);
  std::vector<ExtReal> xs;
  for (int k = 0; k < 200; ++k) {
    const int v = pick(rng);
    xs.push_back(v == -3 ? kMinus : v == 3 ? kPlus : fin(v));
  }
  for (ExtReal a : xs) {
    for (ExtReal b : xs) {
      const int rel = (a < b) + (a == b) + (b < a);
      CHECK(rel == 1);
      for (ExtReal c : {fin(0), kPlus, kMinus}) {
        if (a <= b && b <= c) CHECK(a <= c);
      }
    }
  }
}

TEST_CASE("build_metric_space") {
  using absconv::build_metric_space;
  const auto line = build_metric_space({{0.0}, {1.0}, {2.0}}, absconv::Euclidean{});
  CHECK(line.dist(0, 2) == 2.0);
  CHECK(line.size() == 3);
  CHECK(line.diameter() == 2.0);

  const auto single = build_metric_space({{4.0, 5.0}}, absconv::Euclidean{});
  CHECK(single.size() == 1);
  CHECK(single.dist(0, 0) == 0.0);

  CHECK_ERRC(build_metric_space({}, absconv::CustomMetric{{{0, 1}, {2, 0}}}), Errc::kNonMetric);
  CHECK_ERRC(build_metric_space({}, absconv::CustomMetric{{{1}}}), Errc::kNonMetric);
  CHECK_ERRC(build_metric_space({}, absconv::CustomMetric{{{0, 0}, {0, 0}}}), Errc::kNonMetric);
  CHECK_ERRC(build_metric_space({}, absconv::CustomMetric{{{0, -1}, {-1, 0}}}), Errc::kNonMetric);
  CHECK_ERRC(build_metric_space({{0.0}, {0.0}}, absconv::Euclidean{}), Errc::kNonMetric);
  CHECK_ERRC(build_metric_space({}, absconv::Euclidean{}), Errc::kEmptyDomain);
  CHECK_ERRC(build_metric_space({{0.0}, {1.0, 2.0}}, absconv::Euclidean{}), Errc::kDimensionMismatch);

  // Triangle inequality fails: d(0,2) = 5 > d(0,1) + d(1,2) = 2.
  const absconv::CustomMetric bad{{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}};
  CHECK_ERRC(build_metric_space({}, bad), Errc::kNonMetric);
  CHECK_NOTHROW(build_metric_space({}, bad, absconv::Validate::kFast));
}

TEST_CASE("euclidean distances match the norm on random point sets") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<absconv::Point> pts(12, absconv::Point(3));
    for (auto& p : pts) {
      for (auto& c : p) c = g(rng);
    }
    const auto space = absconv::build_metric_space(pts, absconv::Euclidean{});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
        CHECK(std::abs(space.dist(i, j) - std::sqrt(s)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("uniform_line is dyadic-exact on 2^k + 1 points") {
  const auto y = absconv::uniform_line(-1.0, 1.0, 257);
  CHECK(y.size() == 257);
  CHECK(y.point(128)[0] == 0.0);
  CHECK(y.dist(128, 129) == 1.0 / 128.0);
  CHECK_ERRC(absconv::uniform_line(1.0, 1.0, 3), Errc::kInvalidArgument);
}

TEST_CASE("GridFn predicates") {
  using absconv::GridFn;
  const GridFn f({fin(1), kPlus});
  CHECK(f.proper());
  CHECK_FALSE(f.real_valued());
  CHECK_FALSE(GridFn::constant(3, kPlus).proper());
  CHECK(GridFn({fin(0), kMinus}).takes_minus_inf());
  CHECK_FALSE(GridFn({fin(0), kMinus}).proper());
  CHECK(GridFn::from_reals(std::vector<double>{1.0, 2.0}).real_valued());
}
