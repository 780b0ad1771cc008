#pragma once

#include <functional>
#include <vector>

namespace skclt {

inline constexpr int kDefaultQuadratureNodes = 64;
inline constexpr int kMaxQuadratureNodes = 256;

// Gauss-Hermite rule for E f(z), z ~ N(0, 1): weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(int nodes);

double gauss_hermite_expect(const std::function<double(double)>& func, int nodes);
double gauss_hermite_expect(const std::function<double(double)>& func, const GaussHermiteRule& rule);

// Replica-symmetric fixed point q = E th^2(beta z sqrt(q) + h).
struct QSolution {
  double q = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int quadrature_nodes = 0;
};

struct QSolverOptions {
  double damping = 0.5;
  int max_iters = 10000;
  int nodes = kDefaultQuadratureNodes;
};

// The map Phi(q) = E th^2(beta z sqrt(q) + h).
double q_map(double beta, double h, double q, const GaussHermiteRule& rule);

// Damped iteration from q0 = th^2(h). h = 0 returns the root q = 0 directly.
// Throws ConvergenceError (carrying the last iterate) after max_iters.
QSolution solve_q(double beta, double h, double tol = 1e-12, const QSolverOptions& options = {});

}  // namespace skclt
