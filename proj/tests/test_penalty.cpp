#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "admmreg/errors.hpp"
#include "admmreg/penalty.hpp"
#include "admmreg/rng.hpp"

using namespace admmreg;

namespace {

GridVector vec(std::initializer_list<double> v) {
  return GridVector(std::vector<double>(v), Shape{v.size()});
}

GridVector random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  GridVector v = GridVector::zeros(Shape{n});
  for (std::size_t i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

// Scalar grid search over the 1D prox objective, the independent reference
// for the closed-form shrinkage.
double prox_scalar_grid_search(double v, double w, double nu, double rho2) {
  const double lo = std::min(0.0, v) - 1.0;
  const double hi = std::max(0.0, v) + 1.0;
  const std::size_t steps = 4'000'001;
  double best_y = lo, best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < steps; ++i) {
    const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    const double obj = w * std::abs(y) + 0.5 * nu * y * y + 0.5 * rho2 * (y - v) * (y - v);
    if (obj < best_obj) {
      best_obj = obj;
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace

TEST_CASE("value evaluates the weighted l1 plus quadratic") {
  Penalty f(0.001);
  CHECK(f.value(GridVector::zeros(Shape{4})) == 0.0);
  CHECK(f.value(vec({2.0, -2.0})) == doctest::Approx(4.004).epsilon(1e-14));

  Penalty g(2.0, std::vector<double>{0.0, 1.0});
  CHECK(g.value(vec({3.0, 0.0})) == doctest::Approx(9.0).epsilon(1e-14));

  CHECK_THROWS_AS(g.value(vec({1.0, 2.0, 3.0})), DimensionError);
  CHECK_THROWS_AS(Penalty(0.0), ParameterError);
  CHECK_THROWS_AS(Penalty(1.0, std::vector<double>{-0.5}), ParameterError);
}

TEST_CASE("prox shrinkage formula against scalar grid search") {
  Penalty f(0.001);
  CHECK(norm(f.prox(GridVector::zeros(Shape{3}), 10.0)) == 0.0);

  GridVector y = f.prox(vec({1.0}), 10.0);
  CHECK(y[0] == doctest::Approx(0.8999100089991001).epsilon(1e-14));
  const double grid = prox_scalar_grid_search(1.0, 1.0, 0.001, 10.0);
  CHECK(y[0] == doctest::Approx(grid).epsilon(2e-6));

  // rho2 |v| below the weight forces the zero.
  CHECK(f.prox(vec({0.05}), 10.0)[0] == 0.0);

  CHECK_THROWS_AS(f.prox(vec({1.0}), 0.0), ParameterError);
  CHECK_THROWS_AS(f.prox(vec({1.0}), -2.0), ParameterError);
}

TEST_CASE("prox subgradient certificate") {
  Penalty f(0.001);
  // v = 0: mu = 0 is in the subdifferential at 0.
  GridVector zero = GridVector::zeros(Shape{2});
  CHECK(norm(f.subgradient_from_prox(zero, f.prox(zero, 10.0), 10.0)) == 0.0);
  CHECK(f.check_subgradient(zero, zero, 1e-12));

  GridVector v = vec({1.0});
  GridVector y = f.prox(v, 10.0);
  GridVector mu = f.subgradient_from_prox(v, y, 10.0);
  CHECK(mu[0] == doctest::Approx(1.0008999100089991).epsilon(1e-12));
  // Analytically mu_i = w_i sign(y_i) + nu y_i at a nonzero coordinate.
  CHECK(mu[0] == doctest::Approx(1.0 + 0.001 * y[0]).epsilon(1e-13));

  GridVector v2 = vec({0.05});
  GridVector y2 = f.prox(v2, 10.0);
  GridVector mu2 = f.subgradient_from_prox(v2, y2, 10.0);
  CHECK(y2[0] == 0.0);
  CHECK(mu2[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.check_subgradient(y2, mu2, 1e-12));
}

TEST_CASE("check_subgradient rejects non-members") {
  Penalty f(0.001);
  CHECK(f.check_subgradient(vec({0.899910008999100}), vec({1.000899910008999}), 1e-9));
  CHECK_FALSE(f.check_subgradient(vec({0.0}), vec({1.5}), 1e-9));
  CHECK_THROWS_AS(f.check_subgradient(vec({1.0}), vec({1.0, 2.0}), 1e-9), DimensionError);
}

TEST_CASE("bregman distance: exact values and strong-convexity lower bound") {
  Penalty f(0.001);
  GridVector y = vec({0.3, -0.6});
  GridVector mu = vec({1.0 + 0.001 * 0.3, -1.0 - 0.001 * 0.6});
  CHECK(f.bregman(y, y, mu) == 0.0);

  // y = 0, mu = 0, ybar a unit spike: D = f(ybar) = 1.0005.
  GridVector zero = GridVector::zeros(Shape{1});
  const double d = f.bregman(vec({1.0}), zero, zero);
  CHECK(d == doctest::Approx(1.0005).epsilon(1e-14));
  CHECK(d >= 0.5 * 0.001);

  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    GridVector v = random_vector(6, rng, 2.0);
    GridVector yy = f.prox(v, 5.0);
    GridVector mm = f.subgradient_from_prox(v, yy, 5.0);
    GridVector ybar = random_vector(6, rng, 2.0);
    const double dist = f.bregman(ybar, yy, mm);
    const double bound = 0.5 * f.nu() * norm_squared(ybar - yy);
    CHECK(dist >= bound - 1e-12);
  }
}

TEST_CASE("prox optimality, monotone subgradients, contraction, minimality") {
  Penalty f(0.001);
  const double rho2 = 10.0;
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    GridVector v = random_vector(8, rng, 1.5);
    GridVector vbar = random_vector(8, rng, 1.5);
    GridVector y = f.prox(v, rho2);
    GridVector ybar = f.prox(vbar, rho2);
    GridVector mu = f.subgradient_from_prox(v, y, rho2);
    GridVector mubar = f.subgradient_from_prox(vbar, ybar, rho2);

    CHECK(f.check_subgradient(y, mu, 1e-10));

    // <mu - mubar, y - ybar> >= 2 c0 ||y - ybar||^2 with c0 = nu/2.
    const double lhs = dot(mu - mubar, y - ybar);
    CHECK(lhs >= f.nu() * norm_squared(y - ybar) - 1e-12);

    // Contraction factor rho2 / (nu + rho2).
    CHECK(norm(y - ybar) <= rho2 / (f.nu() + rho2) * norm(v - vbar) + 1e-12);

    // Minimality of the prox objective against random competitors.
    const double obj_y = f.value(y) + 0.5 * rho2 * norm_squared(y - v);
    for (int c = 0; c < 5; ++c) {
      GridVector z = random_vector(8, rng, 1.5);
      const double obj_z = f.value(z) + 0.5 * rho2 * norm_squared(z - v);
      CHECK(obj_y <= obj_z + 1e-12);
    }
  }
}

TEST_CASE("per-entry weights: zero-weight coordinates are not shrunk toward a threshold") {
  Penalty f(0.5, std::vector<double>{0.0, 2.0});
  GridVector v = vec({0.4, 0.4});
  GridVector y = f.prox(v, 1.0);
  // w = 0: plain ridge scaling rho2 v / (nu + rho2); w = 2 dominates: zero.
  CHECK(y[0] == doctest::Approx(0.4 / 1.5).epsilon(1e-14));
  CHECK(y[1] == 0.0);
}
