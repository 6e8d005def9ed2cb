#include <cmath>
#include <limits>

#include "cyberbond/optimize.hpp"
#include "doctest.h"

using namespace cyberbond::optimize;

namespace {

double rosenbrock(const std::vector<double>& x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

}  // namespace

TEST_CASE("nelder-mead finds the rosenbrock minimum") {
  const auto r = nelder_mead(rosenbrock, {-1.2, 1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("bfgs finds the rosenbrock minimum") {
  const auto r = bfgs(rosenbrock, {-1.2, 1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("one-dimensional simplex") {
  const auto r = nelder_mead([](const std::vector<double>& x) { return std::pow(x[0] - 3.0, 2); }, {0.0});
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("infeasible values are never accepted") {
  // Minimum of x^2 constrained to x > 1 sits on the boundary.
  const Objective f = [](const std::vector<double>& x) {
    return x[0] <= 1.0 ? std::numeric_limits<double>::quiet_NaN() : x[0] * x[0];
  };
  const auto r = nelder_mead(f, {3.0});
  CHECK(r.x[0] > 1.0);
  CHECK(r.x[0] < 1.001);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("numeric gradient of a quadratic") {
  const Objective f = [](const std::vector<double>& x) { return 3.0 * x[0] * x[0] + x[0] * x[1]; };
  const auto g = numeric_gradient(f, {1.0, 2.0});
  CHECK(g[0] == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-8));
}
