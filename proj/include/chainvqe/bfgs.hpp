#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainvqe {

enum class BfgsStatus { converged, iteration_cap, line_search_failure };

inline const char* to_string(BfgsStatus s) {
  switch (s) {
  case BfgsStatus::converged: return "converged";
  case BfgsStatus::iteration_cap: return "iteration_cap";
  default: return "line_search_failure";
  }
}

struct BfgsOptions {
  int max_iterations = 50000;
  double grad_tol = 1e-6; // inf-norm stopping threshold
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  bool record_trace = true;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  BfgsStatus status = BfgsStatus::iteration_cap;
  std::vector<std::pair<int, double>> trace; // (iteration, objective) at accepted steps
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

} // namespace detail

/// Quasi-Newton minimization with the inverse-Hessian BFGS update and a strong
/// Wolfe line search (sufficient decrease c1, curvature c2). Stops on gradient
/// inf-norm below tol, the iteration cap, or line-search failure; the returned
/// trace is non-increasing over accepted steps.
inline BfgsResult minimize_bfgs(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::function<std::vector<double>(const std::vector<double>&)>& grad,
    std::vector<double> x0, const BfgsOptions& opts = {}) {
  if (!(opts.wolfe_c1 > 0.0 && opts.wolfe_c1 < opts.wolfe_c2 && opts.wolfe_c2 < 1.0))
    throw std::invalid_argument("minimize_bfgs: need 0 < c1 < c2 < 1");

  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0);
  double fx = objective(x);
  if (!std::isfinite(fx)) throw std::runtime_error("minimize_bfgs: non-finite initial objective");
  std::vector<double> g = grad(x);

  // dense inverse-Hessian approximation, identity start
  std::vector<double> hinv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;

  BfgsResult result;
  if (opts.record_trace) result.trace.emplace_back(0, fx);

  std::vector<double> p(n), x_new(n), g_new(n), s(n), y(n), hy(n);
  bool first_update = true;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    if (detail::inf_norm(g) < opts.grad_tol) {
      result.status = BfgsStatus::converged;
      break;
    }

    // p = -Hinv g
    for (std::size_t i = 0; i < n; ++i) {
      double s_i = 0.0;
      for (std::size_t j = 0; j < n; ++j) s_i += hinv[i * n + j] * g[j];
      p[i] = -s_i;
    }
    double dphi0 = detail::dot(g, p);
    if (!(dphi0 < 0.0)) {
      // numerically lost positive-definiteness: steepest-descent reset
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) hinv[i * n + j] = 0.0;
        hinv[i * n + i] = 1.0;
        p[i] = -g[i];
      }
      dphi0 = detail::dot(g, g) * -1.0;
      first_update = true;
      if (!(dphi0 < 0.0)) {
        result.status = BfgsStatus::converged; // zero gradient
        break;
      }
    }

    const auto phi = [&](double a) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + a * p[i];
      return objective(x_new);
    };
    const auto phi_grad = [&](double a) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + a * p[i];
      g_new = grad(x_new);
      return detail::dot(g_new, p);
    };

    // strong Wolfe line search (bracket + zoom)
    const double c1 = opts.wolfe_c1, c2 = opts.wolfe_c2;
    double alpha = 0.0, f_alpha = fx;
    bool found = false, have_grad_at_alpha = false;
    {
      double a_prev = 0.0, f_prev = fx;
      double a = 1.0;
      double a_lo = -1.0, a_hi = -1.0, f_lo = 0.0;
      for (int ls = 0; ls < 30 && !found; ++ls) {
        const double fa = phi(a);
        if (!std::isfinite(fa) || fa > fx + c1 * a * dphi0 || (ls > 0 && fa >= f_prev)) {
          a_lo = a_prev; f_lo = f_prev; a_hi = a;
          break;
        }
        const double da = phi_grad(a);
        if (std::abs(da) <= -c2 * dphi0) {
          alpha = a; f_alpha = fa; found = true; have_grad_at_alpha = true;
          break;
        }
        if (da >= 0.0) {
          a_lo = a; f_lo = fa; a_hi = a_prev;
          break;
        }
        a_prev = a; f_prev = fa;
        a *= 2.0;
        if (a > 1e10) break;
      }
      if (!found && a_lo >= 0.0) {
        // zoom by bisection with a sufficient-decrease fallback
        for (int z = 0; z < 40 && !found; ++z) {
          const double a_mid = 0.5 * (a_lo + a_hi);
          if (a_mid == a_lo || a_mid == a_hi) break;
          const double fm = phi(a_mid);
          if (!std::isfinite(fm) || fm > fx + c1 * a_mid * dphi0 || fm >= f_lo) {
            a_hi = a_mid;
          } else {
            const double dm = phi_grad(a_mid);
            if (std::abs(dm) <= -c2 * dphi0) {
              alpha = a_mid; f_alpha = fm; found = true; have_grad_at_alpha = true;
              break;
            }
            if (dm * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
            a_lo = a_mid; f_lo = fm;
          }
        }
        if (!found && a_lo > 0.0 && f_lo < fx) {
          // curvature never satisfied inside the bracket: accept the decrease
          alpha = a_lo; f_alpha = f_lo; found = true; have_grad_at_alpha = false;
        }
      }
    }

    if (!found || alpha <= 0.0) {
      result.status = BfgsStatus::line_search_failure;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = alpha * p[i];
      x_new[i] = x[i] + s[i];
    }
    if (!have_grad_at_alpha) g_new = grad(x_new);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];

    x.swap(x_new);
    fx = f_alpha;
    g.swap(g_new);
    result.iterations = iter;
    if (opts.record_trace) result.trace.emplace_back(iter, fx);

    const double sy = detail::dot(s, y);
    if (sy > 1e-14 * std::sqrt(detail::dot(s, s) * detail::dot(y, y))) {
      if (first_update) {
        // scale the initial inverse Hessian (Nocedal-Wright 6.20)
        const double gamma = sy / detail::dot(y, y);
        for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = gamma;
        first_update = false;
      }
      // Hinv <- (I - rho s y^T) Hinv (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += hinv[i * n + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = detail::dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          hinv[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                             rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j];
        }
      }
    }

    if (iter == opts.max_iterations) result.status = BfgsStatus::iteration_cap;
  }

  result.x = std::move(x);
  result.value = fx;
  return result;
}

} // namespace chainvqe
