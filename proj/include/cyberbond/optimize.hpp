#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cyberbond::optimize {

using Objective = std::function<double(const std::vector<double>&)>;

struct Result {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

struct SimplexOptions {
  double initial_step = 0.1;
  double f_tolerance = 1e-13;
  double x_tolerance = 1e-10;
  std::size_t max_iterations = 20000;
};

/// Nelder-Mead minimization (standard reflection/expansion/contraction/shrink
/// coefficients 1, 2, 1/2, 1/2). Non-finite objective values are treated as
/// +infinity so infeasible regions are simply never accepted.
Result nelder_mead(const Objective& f, std::vector<double> start, const SimplexOptions& opts = {});

struct QuasiNewtonOptions {
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-14;
  std::size_t max_iterations = 2000;
};

/// BFGS with central-difference gradients and a backtracking Armijo line search.
Result bfgs(const Objective& f, std::vector<double> start, const QuasiNewtonOptions& opts = {});

/// Central-difference gradient with per-coordinate step h_i = 1e-6 * (|x_i| + 1).
std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x);

}  // namespace cyberbond::optimize
