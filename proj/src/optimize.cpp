#include "cyberbond/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cyberbond::optimize {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe(const Objective& f, const std::vector<double>& x, std::size_t& evals) {
  ++evals;
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Result nelder_mead(const Objective& f, std::vector<double> start, const SimplexOptions& opts) {
  const std::size_t n = start.size();
  Result result;
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = opts.initial_step * std::max(std::abs(start[i]), 1.0);
    simplex[i + 1][i] += step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = safe(f, simplex[i], result.evaluations);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  std::vector<double> trial(n);
  auto point_along = [&](double coef, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    return safe(f, trial, result.evaluations);
  };

  for (; result.iterations < opts.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
      }
    }
    const double f_spread = values[worst] - values[best];
    if (std::isfinite(f_spread) &&
        f_spread <= opts.f_tolerance * (std::abs(values[best]) + 1e-300) &&
        spread <= opts.x_tolerance * (max_abs(simplex[best]) + 1.0)) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }

    const double reflected = point_along(-1.0, simplex[worst]);
    if (reflected < values[best]) {
      const auto reflected_point = trial;
      const double expanded = point_along(-2.0, simplex[worst]);
      if (expanded < reflected) {
        simplex[worst] = trial;
        values[worst] = expanded;
      } else {
        simplex[worst] = reflected_point;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    const bool outside = reflected < values[worst];
    const double contracted = point_along(outside ? -0.5 : 0.5, simplex[worst]);
    if (contracted < std::min(reflected, values[worst])) {
      simplex[worst] = trial;
      values[worst] = contracted;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = safe(f, simplex[i], result.evaluations);
    }
  }

  const auto best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x) {
  std::vector<double> g(x.size());
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (std::abs(x[i]) + 1.0);
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Result bfgs(const Objective& f, std::vector<double> start, const QuasiNewtonOptions& opts) {
  const std::size_t n = start.size();
  Result result;
  std::vector<double> x = std::move(start);
  double fx = safe(f, x, result.evaluations);
  if (!std::isfinite(fx)) {
    result.x = x;
    result.value = fx;
    return result;
  }
  std::vector<double> g = numeric_gradient(f, x);
  result.evaluations += 2 * n;
  // Inverse Hessian approximation, row-major.
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;

  std::vector<double> direction(n), x_new(n), g_new(n), s(n), y(n), hy(n);
  for (; result.iterations < opts.max_iterations; ++result.iterations) {
    if (max_abs(g) <= opts.gradient_tolerance * (std::abs(fx) + 1.0)) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      direction[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) direction[i] -= h[i * n + j] * g[j];
    }
    double slope = dot(direction, g);
    if (slope >= 0.0) {
      // Lost descent: reset to steepest descent.
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        h[i * n + i] = 1.0;
        direction[i] = -g[i];
      }
      slope = dot(direction, g);
    }

    double step = 1.0;
    double f_new = kInf;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * direction[i];
      f_new = safe(f, x_new, result.evaluations);
      if (f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    g_new = numeric_gradient(f, x_new);
    result.evaluations += 2 * n;
    double step_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
      step_norm = std::max(step_norm, std::abs(s[i]) / (std::abs(x[i]) + 1.0));
    }
    const double previous = fx;
    x = x_new;
    g = g_new;
    fx = f_new;

    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      for (std::size_t i = 0; i < n; ++i) {
        hy[i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h[i * n + j] += ((sy + yhy) * s[i] * s[j]) / (sy * sy) -
                          (hy[i] * s[j] + s[i] * hy[j]) / sy;
        }
      }
    }
    if (step_norm < opts.step_tolerance && std::abs(previous - fx) <= 1e-15 * (std::abs(fx) + 1.0)) {
      result.converged = true;
      break;
    }
  }
  result.x = x;
  result.value = fx;
  return result;
}

}  // namespace cyberbond::optimize
