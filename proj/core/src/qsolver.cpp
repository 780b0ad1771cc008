#include "skclt/qsolver.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "skclt/error.hpp"

namespace skclt {

GaussHermiteRule gauss_hermite_rule(int nodes) {
  if (nodes < 1 || nodes > kMaxQuadratureNodes) {
    throw InvalidArgument("unsupported Gauss-Hermite node count " + std::to_string(nodes) + " (1.." +
                          std::to_string(kMaxQuadratureNodes) + ")");
  }
  // GSL's rule integrates against exp(-x^2); rescale to the standard normal.
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
      gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, static_cast<std::size_t>(nodes), 0.0, 1.0, 0.0,
                                  0.0),
      &gsl_integration_fixed_free);
  if (!ws) throw InvalidArgument("GSL failed to build a Gauss-Hermite rule");
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(nodes));
  rule.weights.resize(static_cast<std::size_t>(nodes));
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[i];
    rule.weights[i] = w[i];
    total += w[i];
  }
  // normalize exactly instead of dividing by sqrt(pi)
  for (double& v : rule.weights) v /= total;
  return rule;
}

double gauss_hermite_expect(const std::function<double(double)>& func, const GaussHermiteRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * func(rule.nodes[i]);
  return acc;
}

double gauss_hermite_expect(const std::function<double(double)>& func, int nodes) {
  return gauss_hermite_expect(func, gauss_hermite_rule(nodes));
}

double q_map(double beta, double h, double q, const GaussHermiteRule& rule) {
  const double scale = beta * std::sqrt(q);
  return gauss_hermite_expect(
      [&](double z) {
        const double th = std::tanh(scale * z + h);
        return th * th;
      },
      rule);
}

QSolution solve_q(double beta, double h, double tol, const QSolverOptions& options) {
  if (!(beta >= 0.0) || !(h >= 0.0) || !(tol > 0.0)) throw InvalidArgument("solve_q needs beta >= 0, h >= 0, tol > 0");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
  const GaussHermiteRule rule = gauss_hermite_rule(options.nodes);
  QSolution sol;
  sol.quadrature_nodes = options.nodes;
  if (h == 0.0) {
    sol.q = 0.0;
    sol.residual = std::abs(q_map(beta, h, 0.0, rule));
    return sol;
  }
  const double th = std::tanh(h);
  double q = th * th;
  for (int it = 0; it <= options.max_iters; ++it) {
    const double phi = q_map(beta, h, q, rule);
    const double residual = std::abs(q - phi);
    if (residual < tol) {
      sol.q = q;
      sol.residual = residual;
      sol.iterations = it;
      return sol;
    }
    q = (1.0 - options.damping) * q + options.damping * phi;
  }
  throw ConvergenceError("q iteration did not converge within " + std::to_string(options.max_iters) + " iterations",
                         q, options.max_iters);
}

}  // namespace skclt
