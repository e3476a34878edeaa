#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "trailscape/trail.hpp"

using namespace trailscape;
using Catch::Approx;

namespace {

Trail1D make_trail(std::vector<double> values) {
  Grid1D g{0.0, 1.0, static_cast<int>(values.size())};
  return Trail1D::from_values(g, values);
}

// Independent reference: evaluate the trapezoid at every in-bounds cell
// center and sum, without going through Trail1D::deposit.
double clipped_mark_mass(const Grid1D& g, const Mark1D& m) {
  double mass = 0.0;
  for (int i = 0; i < g.cells; ++i) mass += m.value_at(g.center(i));
  return mass;
}

}  // namespace

TEST_CASE("deposit adds the trapezoid shape at cell centers", "[trail]") {
  Grid1D grid{0.0, 1.0, 100};

  SECTION("plateau on the top cells, linear flanks") {
    Trail1D t(grid);
    // Support covers 4 cell widths centered on a cell center: top spans
    // distance <= width/4, flanks fall to zero at width/2.
    const Mark1D mark{grid.center(50), 4.0 * grid.step(), 1.0};
    t.deposit(mark);
    REQUIRE(t[50] == Approx(1.0));
    REQUIRE(t[49] == Approx(1.0));  // distance = step = width/4, still on the top
    REQUIRE(t[51] == Approx(1.0));
    REQUIRE(t[48] == Approx(0.0).margin(1e-12));  // distance = width/2, flank end
    REQUIRE(t[52] == Approx(0.0).margin(1e-12));
    // Half-way down the flank
    const double flank = mark.value_at(grid.center(50) + 1.5 * grid.step());
    REQUIRE(flank == Approx(0.5));
    REQUIRE(t[47] == 0.0);
    REQUIRE(t[53] == 0.0);
  }

  SECTION("depositing twice doubles every cell") {
    Trail1D once(grid), twice(grid);
    const Mark1D mark{0.3, 0.08, 0.7};
    once.deposit(mark);
    twice.deposit(mark);
    twice.deposit(mark);
    for (int i = 0; i < grid.cells; ++i) REQUIRE(twice[i] == Approx(2.0 * once[i]));
  }

  SECTION("mark at the grid edge is clipped") {
    Trail1D t(grid);
    const Mark1D edge{0.0, 0.12, 1.0};  // half the support hangs off the axis
    t.deposit(edge);
    double deposited = 0.0;
    for (int i = 0; i < grid.cells; ++i) deposited += t[i];
    const double expected = clipped_mark_mass(grid, edge);
    REQUIRE(deposited == Approx(expected));

    // Full-mark mass, measured on a wider axis that contains the support.
    Grid1D wide{-1.0, 2.0, 300};
    const double full = clipped_mark_mass(wide, edge);
    REQUIRE(deposited < full);
  }

  SECTION("non-finite mark parameters are rejected") {
    Trail1D t(grid);
    REQUIRE_THROWS_AS(t.deposit(Mark1D{std::numeric_limits<double>::quiet_NaN(), 0.1, 1.0}),
                      invalid_mark);
    REQUIRE_THROWS_AS(t.deposit(Mark1D{0.5, std::numeric_limits<double>::infinity(), 1.0}),
                      invalid_mark);
    REQUIRE_THROWS_AS(t.deposit(Mark1D{0.5, -0.1, 1.0}), invalid_mark);
    REQUIRE_THROWS_AS(t.deposit(Mark1D{0.5, 0.1, -1.0}), invalid_mark);
  }

  SECTION("result intensities never fall below the input") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Trail1D t(grid);
    for (int k = 0; k < 50; ++k) {
      const std::vector<double> before(t.intensity().begin(), t.intensity().end());
      t.deposit(Mark1D{u(rng), 0.01 + 0.3 * u(rng), u(rng)});
      for (int i = 0; i < grid.cells; ++i) REQUIRE(t[i] >= before[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("evaporate subtracts and clamps at zero", "[trail]") {
  SECTION("[3,1,0] with delta 1 -> [2,0,0]") {
    Trail1D t = make_trail({3.0, 1.0, 0.0});
    t.evaporate(1.0);
    REQUIRE(t[0] == Approx(2.0));
    REQUIRE(t[1] == 0.0);
    REQUIRE(t[2] == 0.0);
  }

  SECTION("delta 0 leaves the trail unchanged") {
    Trail1D t = make_trail({0.5, 0.25, 0.0, 1.0});
    const std::vector<double> before(t.intensity().begin(), t.intensity().end());
    t.evaporate(0.0);
    for (std::size_t i = 0; i < before.size(); ++i) REQUIRE(t[static_cast<int>(i)] == before[i]);
  }

  SECTION("all-zero trail is an absorbing state") {
    Trail1D t(Grid1D{0.0, 1.0, 10});
    t.evaporate(123.0);
    REQUIRE(t.all_zero());
  }

  SECTION("negative delta is rejected") {
    Trail1D t = make_trail({1.0, 2.0});
    REQUIRE_THROWS_AS(t.evaporate(-0.5), invalid_parameter);
  }
}

TEST_CASE("jaccard similarity of trails", "[trail]") {
  SECTION("identical nonzero trails score 1") {
    Trail1D a = make_trail({0.2, 1.0, 0.0, 3.0});
    REQUIRE(jaccard(a, a) == Approx(1.0));
  }

  SECTION("disjoint supports score 0") {
    Trail1D a = make_trail({1.0, 2.0, 0.0, 0.0});
    Trail1D b = make_trail({0.0, 0.0, 3.0, 1.0});
    REQUIRE(jaccard(a, b) == 0.0);
  }

  SECTION("hand-computed min/max sums") {
    Trail1D a = make_trail({1.0, 2.0, 0.0});
    Trail1D b = make_trail({1.0, 1.0, 1.0});
    REQUIRE(jaccard(a, b) == Approx(0.5));  // (1+1+0) / (1+2+1)
  }

  SECTION("grid mismatch is rejected") {
    Trail1D a(Grid1D{0.0, 1.0, 10});
    Trail1D b(Grid1D{0.0, 1.0, 20});
    REQUIRE_THROWS_AS(jaccard(a, b), incompatible_grids);
  }

  SECTION("both all-zero scores 0") {
    Trail1D a(Grid1D{0.0, 1.0, 10});
    Trail1D b(Grid1D{0.0, 1.0, 10});
    REQUIRE(jaccard(a, b) == 0.0);
  }

  SECTION("randomized bounds, symmetry and scale invariance") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> va(32), vb(32);
      for (auto& v : va) v = u(rng) < 0.3 ? 0.0 : u(rng);
      for (auto& v : vb) v = u(rng) < 0.3 ? 0.0 : u(rng);
      Trail1D a = make_trail(va), b = make_trail(vb);
      const double s = jaccard(a, b);
      REQUIRE(s >= 0.0);
      REQUIRE(s <= 1.0);
      REQUIRE(jaccard(b, a) == Approx(s));
      const double k = 0.1 + 5.0 * u(rng);
      std::vector<double> ka(va), kb(vb);
      for (auto& v : ka) v *= k;
      for (auto& v : kb) v *= k;
      REQUIRE(jaccard(make_trail(ka), make_trail(kb)) == Approx(s).margin(1e-12));
    }
  }
}

TEST_CASE("trail_of_series folds evaporate-then-deposit", "[trail]") {
  const Grid1D grid{0.0, 1.0, 100};

  SECTION("a single sample equals its lone mark regardless of delta") {
    for (double delta : {0.0, 0.3, 5.0}) {
      const std::vector<double> sample{0.4};
      const Trail1D t = trail_of_series(sample, {0.08, delta, 1.0, grid});
      Trail1D expected(grid);
      expected.deposit(Mark1D{0.4, 0.08, 1.0});
      for (int i = 0; i < grid.cells; ++i) REQUIRE(t[i] == Approx(expected[i]));
    }
  }

  SECTION("constant samples: monotone growth at the deposit-minus-decay rate") {
    // Step-by-step reference simulation, independent of trail_of_series.
    const double delta = 0.05;
    const Mark1D mark{0.5, 0.08, 1.0};
    Trail1D reference(grid);
    double prev_peak = 0.0;
    std::vector<double> gains;
    for (int step = 0; step < 60; ++step) {
      reference.evaporate(delta);
      reference.deposit(mark);
      double peak = 0.0;
      for (int i = 0; i < grid.cells; ++i) peak = std::max(peak, reference[i]);
      REQUIRE(peak >= prev_peak);  // deposit outpaces evaporation at these settings
      gains.push_back(peak - prev_peak);
      prev_peak = peak;
    }
    // Once the support is established the net gain settles at height - delta.
    REQUIRE(gains.back() == Approx(1.0 - delta).margin(1e-9));

    const std::vector<double> samples(60, 0.5);
    const Trail1D t = trail_of_series(samples, {0.08, delta, 1.0, grid});
    for (int i = 0; i < grid.cells; ++i) REQUIRE(t[i] == Approx(reference[i]));
  }

  SECTION("constant samples with delta >= height: the peak plateaus at the mark height") {
    const std::vector<double> samples(40, 0.5);
    const Trail1D t = trail_of_series(samples, {0.08, 1.0, 1.0, grid});
    double peak = 0.0;
    for (int i = 0; i < grid.cells; ++i) peak = std::max(peak, t[i]);
    REQUIRE(peak == Approx(1.0));  // each step wipes the previous mark entirely
  }

  SECTION("alternating samples with delta >= height keep only the last mark's support") {
    std::vector<double> samples;
    for (int i = 0; i < 10; ++i) {
      samples.push_back(0.1);
      samples.push_back(0.9);
    }
    const double delta = 1.0;  // wipes a unit mark in one step
    const Trail1D t = trail_of_series(samples, {0.08, delta, 1.0, grid});
    Trail1D last_only(grid);
    last_only.deposit(Mark1D{0.9, 0.08, 1.0});
    for (int i = 0; i < grid.cells; ++i) REQUIRE(t[i] == Approx(last_only[i]));
  }

  SECTION("samples outside [0,1] are rejected") {
    const std::vector<double> bad{0.5, 1.2};
    REQUIRE_THROWS_AS(trail_of_series(bad, {0.1, 0.1, 1.0, grid}), invalid_parameter);
  }
}

TEST_CASE("trail algebra properties", "[trail][property]") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid1D grid{0.0, 1.0, 64};

  SECTION("non-negativity after arbitrary operation sequences") {
    for (int trial = 0; trial < 200; ++trial) {
      Trail1D t(grid);
      for (int op = 0; op < 30; ++op) {
        if (u(rng) < 0.5) {
          t.deposit(Mark1D{u(rng), 0.01 + 0.2 * u(rng), u(rng)});
        } else {
          t.evaporate(0.3 * u(rng));
        }
        for (double v : t.intensity()) REQUIRE(v >= 0.0);
      }
    }
  }

  SECTION("deposit order does not matter within a time step") {
    for (int trial = 0; trial < 100; ++trial) {
      const Mark1D m1{u(rng), 0.01 + 0.2 * u(rng), u(rng)};
      const Mark1D m2{u(rng), 0.01 + 0.2 * u(rng), u(rng)};
      Trail1D ab(grid), ba(grid);
      ab.deposit(m1);
      ab.deposit(m2);
      ba.deposit(m2);
      ba.deposit(m1);
      for (int i = 0; i < grid.cells; ++i) REQUIRE(ab[i] == Approx(ba[i]));
    }
  }

  SECTION("evaporation composes additively") {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> v(32);
      for (auto& x : v) x = 2.0 * u(rng);
      const double d1 = 0.8 * u(rng), d2 = 0.8 * u(rng);
      Trail1D split = Trail1D::from_values(Grid1D{0.0, 1.0, 32}, v);
      Trail1D joint = Trail1D::from_values(Grid1D{0.0, 1.0, 32}, v);
      split.evaporate(d1);
      split.evaporate(d2);
      joint.evaporate(d1 + d2);
      for (int i = 0; i < 32; ++i) REQUIRE(split[i] == Approx(joint[i]).margin(1e-12));
    }
  }

  SECTION("an isolated mark vanishes after exactly ceil(h/delta) evaporations") {
    for (int trial = 0; trial < 100; ++trial) {
      const double h = 0.1 + u(rng);
      const double delta = 0.05 + 0.4 * u(rng);
      Trail1D t(grid);
      t.deposit(Mark1D{0.5, 0.1, h});
      const int expected_steps = static_cast<int>(std::ceil(h / delta));
      int steps = 0;
      while (!t.all_zero()) {
        t.evaporate(delta);
        ++steps;
        REQUIRE(steps <= expected_steps);
      }
      REQUIRE(steps == expected_steps);
    }
  }
}

TEST_CASE("2-D trails mirror the 1-D contracts", "[trail]") {
  const Grid2D grid{0.0, 100.0, 0.0, 100.0, 50, 50};

  SECTION("cone deposit: full height inside the top radius, zero beyond the base") {
    Trail2D t(grid);
    const Mark2D cone{50.0, 50.0, 10.0, 2.0};
    t.deposit(cone);
    const int ci = 24, cj = 24;  // cell center (49, 49), within the top radius
    REQUIRE(t.at(ci, cj) == Approx(cone.value_at(grid.x_center(ci), grid.y_center(cj))));
    REQUIRE(t.at(ci, cj) == Approx(2.0));
    REQUIRE(t.at(0, 0) == 0.0);
    // Flank cell: distance between top and base radius
    const double d = std::hypot(grid.x_center(28) - 50.0, grid.y_center(24) - 50.0);
    REQUIRE(d > 5.0);
    REQUIRE(d < 10.0);
    REQUIRE(t.at(28, 24) == Approx(2.0 * (10.0 - d) / 5.0));
  }

  SECTION("jaccard and evaporation behave as in 1-D") {
    Trail2D a(grid), b(grid);
    a.deposit(Mark2D{30.0, 30.0, 8.0, 1.0});
    b.deposit(Mark2D{30.0, 30.0, 8.0, 1.0});
    REQUIRE(jaccard(a, b) == Approx(1.0));
    b.evaporate(0.25);
    const double s = jaccard(a, b);
    REQUIRE(s > 0.0);
    REQUIRE(s < 1.0);
    Trail2D far(grid);
    far.deposit(Mark2D{80.0, 80.0, 8.0, 1.0});
    REQUIRE(jaccard(a, far) == 0.0);
  }

  SECTION("boundary events go to the lower-index cell") {
    REQUIRE(grid.cell_of(0.0, 0.0) == 0);
    REQUIRE(grid.cell_of(2.0, 0.0) == 0);   // boundary between cells 0 and 1
    REQUIRE(grid.cell_of(2.1, 0.0) == 1);
    REQUIRE(grid.cell_of(100.0, 0.5) == 49);  // grid edge stays inside
    REQUIRE(grid.cell_of(100.1, 0.5) == -1);
    REQUIRE(grid.cell_of(-0.1, 0.5) == -1);
  }
}
