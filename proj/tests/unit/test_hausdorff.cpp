#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "exospin/errors.hpp"
#include "exospin/hausdorff.hpp"

using namespace exospin;

namespace {

// Cells of the offset grid whose interior meets some box interior, by enumeration.
unsigned long long brute_cells_2d(const std::vector<Box>& boxes, double delta, double ox, double oy) {
  unsigned long long n = 0;
  for (int i = -40; i < 80; ++i)
    for (int j = -40; j < 80; ++j) {
      const double x0 = ox + i * delta, y0 = oy + j * delta;
      for (const Box& b : boxes) {
        if (b.lo[0] < x0 + delta && b.hi[0] > x0 && b.lo[1] < y0 + delta && b.hi[1] > y0) {
          ++n;
          break;
        }
      }
    }
  return n;
}

EquippedLocalSet equipped(const std::string& text) {
  std::istringstream in(text);
  return EquippedLocalSet::parse(in);
}

}  // namespace

TEST_CASE("diameters") {
  CHECK(diameter(Box::unit(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(diameter(Box{{0, 0, 0}, {1, 2, 2}}) == doctest::Approx(3.0));
  CHECK(diameter(std::vector<Point>{{0, 0}, {3, 4}, {1, 1}}) == doctest::Approx(5.0));
  CHECK(diameter(std::vector<Point>{{2, 2}}) == 0.0);
  CHECK_THROWS_AS(diameter(std::vector<Point>{}), PreconditionError);
  CHECK_THROWS_AS(diameter(Box{{1}, {0}}), PreconditionError);
  CHECK_THROWS_AS(diameter(Box{{0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}}), PreconditionError);
}

TEST_CASE("covering specs") {
  const auto spec = CoveringSpec::halving(1e-3, 4);
  CHECK(spec.deltas == std::vector<double>{8e-3, 4e-3, 2e-3, 1e-3});
  CHECK(spec.delta_min() == 1e-3);
  CHECK_THROWS_AS(validate_covering(CoveringSpec{{0.1, 0.2}}), PreconditionError);
  CHECK_THROWS_AS(validate_covering(CoveringSpec{}), PreconditionError);
  CHECK_THROWS_AS(CoveringSpec::halving(0.0), PreconditionError);
}

TEST_CASE("cell counts against enumeration") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Box> boxes;
    for (int q = 0; q < 3; ++q) {
      const double x = u(rng), y = u(rng);
      boxes.push_back(Box{{x, y}, {x + 0.1 + 0.5 * u(rng), y + 0.1 + 0.5 * u(rng)}});
    }
    const double delta = 0.07 + 0.01 * (trial % 5);
    CHECK(occupied_cells(boxes, delta) == brute_cells_2d(boxes, delta, 0.0, 0.0));
    CHECK(occupied_cells(boxes, delta, {0.013, 0.05}) == brute_cells_2d(boxes, delta, 0.013, 0.05));
    CHECK(min_occupied_cells(boxes, delta) <= occupied_cells(boxes, delta));
  }
}

TEST_CASE("min_occupied_cells does not depend on where the set sits") {
  const Box b{{0.05, 0.0}, {0.35, 0.2}};
  CHECK(occupied_cells({b}, 0.1) == 8);
  CHECK(min_occupied_cells({b}, 0.1) == 6);
  for (double shift : {0.0, 0.0123, 0.37, 1.91}) {
    const Box moved{{b.lo[0] + shift, b.lo[1] - shift}, {b.hi[0] + shift, b.hi[1] - shift}};
    CHECK(min_occupied_cells({moved}, 0.1) == 6);
  }
}

TEST_CASE("unit boxes have measure one in their own dimension") {
  const auto spec = CoveringSpec::halving(1e-3, 6);
  const auto line = measure_estimate(Box::unit(1), 1.0, spec);
  CHECK(line.estimate == doctest::Approx(1.0).epsilon(1e-3));
  const auto square = measure_estimate(Box::unit(2), 2.0, CoveringSpec::halving(1e-3, 3));
  CHECK(square.estimate == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(square.counts.back() == 1000000ULL);
  CHECK(std::abs(square.trend) <= 1e-3);

  // Above the dimension the series falls off like delta.
  const auto cube = measure_estimate(Box::unit(2), 3.0, CoveringSpec::halving(1e-2, 4));
  for (std::size_t n = 1; n < cube.values.size(); ++n) CHECK(cube.values[n] < cube.values[n - 1]);
  CHECK(cube.estimate <= 0.011);
  // The s = 0 count is the number of cells.
  CHECK(measure_estimate(Box::unit(1), 0.0, CoveringSpec::halving(0.1, 1)).estimate == 10.0);
  CHECK_THROWS_AS(measure_estimate(Box::unit(1), -1.0, spec), PreconditionError);
}

TEST_CASE("scaled sets") {
  const Box b{{1.0, -2.0}, {3.0, 2.0}};
  const Box s = scale_set(b, 0.25);
  CHECK(s.lo == Point{0.75, -1.5});
  CHECK(s.hi == Point{2.25, 1.5});
  CHECK_THROWS_AS(scale_set(b, 1.0), PreconditionError);
  CHECK_THROWS_AS(scale_set(b, 0.0), PreconditionError);
}

TEST_CASE("scaling law") {
  const auto spec = CoveringSpec::halving(2e-3, 4);
  for (double phi : {0.1, 0.5, 0.75}) {
    const auto c = scaling_law_check(Box::unit(2), phi, 2.0, spec);
    CHECK(c.rhs == doctest::Approx((1 - phi) * (1 - phi)).epsilon(1e-3));
    CHECK(c.gap <= 1e-2);
  }
  const auto line = scaling_law_check(Box{{0.3}, {1.7}}, 0.4, 1.0, spec);
  CHECK(line.lhs == doctest::Approx(0.6 * 1.4).epsilon(1e-2));
  // At s = 0 only matched resolutions compare like with like.
  const auto counts = scaling_law_check(Box::unit(2), 0.5, 0.0, CoveringSpec::halving(0.05, 2), true);
  CHECK(counts.gap == 0.0);
}

TEST_CASE("equipped local sets") {
  const auto spec = CoveringSpec::halving(1e-3, 4);
  const auto two = equipped("0.5 0 1\n0.25 2 3\n");
  const auto m = equipped_measure(two, 1.0, spec);
  CHECK(m.total == doctest::Approx(1.25).epsilon(1e-3));
  CHECK(m.per_piece.size() == 2);
  CHECK(m.per_piece[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(m.gap <= 1e-2);

  // One shared phi reduces to the plain scaling law.
  const auto same = equipped("0.4 0 0 1 1\n0.4 2 0 3 1\n");
  CHECK(equipped_measure(same, 2.0, spec).total == doctest::Approx(2 * 0.36).epsilon(1e-3));

  const auto file = EquippedLocalSet::load(std::string(EXOSPIN_DATA_DIR) + "/sets/two_boxes.set");
  CHECK(file.pieces.size() == 2);
  CHECK(equipped_measure(file, 2.0, spec).total == doctest::Approx(0.25 + 0.5625).epsilon(1e-3));

  CHECK_THROWS_AS(validate_equipped(equipped("0.5 0 1\n0.5 0.5 1.5\n")), PreconditionError);
  CHECK_NOTHROW(validate_equipped(equipped("0.5 0 1\n0.5 1 2\n")));
  CHECK_THROWS_AS(validate_equipped(equipped("1.5 0 1\n")), PreconditionError);
  CHECK_THROWS_AS(validate_equipped(equipped("0.5 0 1\n0.5 0 0 1 1\n")), PreconditionError);
  CHECK_THROWS_AS(equipped("0.5 0\n"), PreconditionError);
}

TEST_CASE("measure grows with the set") {
  const auto spec = CoveringSpec::halving(1e-2, 3);
  double prev = 0.0;
  for (double w : {0.2, 0.4, 0.6, 0.8}) {
    const double v = measure_estimate(Box{{0.0, 0.0}, {w, 0.5}}, 2.0, spec).estimate;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("slowly varying pieces") {
  const auto ok = slowly_varying_check({{0.5, 0.501, 0.499}, {0.2, 0.2}});
  CHECK(ok.all_in_J);
  const auto bad = slowly_varying_check({{0.5, 0.5}, {0.2, 0.3}, {0.7}});
  CHECK_FALSE(bad.all_in_J);
  CHECK(bad.offending == std::vector<std::size_t>{1});
  CHECK(slowly_varying_check({{0.2, 0.3}}, 0.5).all_in_J);
}
