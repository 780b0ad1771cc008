#include <cmath>

#include "doctest.h"
#include "skclt/disorder_stats.hpp"
#include "skclt/error.hpp"
#include "skclt/exact.hpp"
#include "skclt/interpolation.hpp"
#include "skclt/qsolver.hpp"

using namespace skclt;

namespace {

ExpectationPlan small_quadrature(int nodes = 8) {
  ExpectationPlan plan;
  plan.coupling_nodes = nodes;
  plan.cavity_nodes = nodes;
  return plan;
}

ExpectationPlan monte_carlo(long m, int cavity_nodes = 8) {
  ExpectationPlan plan;
  plan.kind = ExpectationPlan::Kind::monte_carlo;
  plan.n_disorders = m;
  plan.cavity_nodes = cavity_nodes;
  plan.base_seed = 3;
  return plan;
}

}  // namespace

TEST_CASE("path energies at the endpoints") {
  const ModelParams p{0.2, 0.3, 6};
  const Disorder d = sample_disorder(8, 6);
  for (ConfigCode c = 0; c < 64; ++c) {
    const SpinConfig s = SpinConfig::from_code(c, 6);
    const PathPoint one{1.0, 1.7, -0.4, 0.3};
    CHECK(path_energy_1(one, p, d, s) == energy(p, d, s));
    CHECK(path_energy_2(one, p, d, s) == energy(p, d, s));
  }
  // t = 0, h = 0, q = 0: no z dependence
  const ModelParams p0{0.2, 0.0, 6};
  const SpinConfig s = SpinConfig::from_code(0b110101, 6);
  CHECK(path_energy_1({0.0, 2.0, 0.0, 0.0}, p0, d, s) == path_energy_1({0.0, -1.0, 0.0, 0.0}, p0, d, s));
  CHECK_THROWS_AS(path_energy_1({1.5, 0.0, 0.0, 0.0}, p0, d, s), InvalidArgument);
  CHECK_THROWS_AS(path_energy_2({0.5, 0.0, 0.0, 0.0}, {0.2, 0.0, 1}, sample_disorder(1, 1), SpinConfig({1})),
                  DimensionError);
}

TEST_CASE("two-coordinate path hand evaluation at N = 3") {
  const double beta = 0.2, h = 0.3, t = 0.5, z1 = 0.7, z2 = -1.1, q = 0.09;
  const Disorder d(3, {0.4, -1.2, 0.9}, 0);  // g_01, g_02, g_12
  const SpinConfig s({1, -1, 1});
  const double c = beta / std::sqrt(3.0);
  // site 0 keeps only its couplings to the two cavity sites, all scaled by sqrt(t)
  const double pairs = std::sqrt(t) * c * (0.4 * 1 * -1 + -1.2 * 1 * 1 + 0.9 * -1 * 1);
  const double fields = h * (1 - 1 + 1);
  const double cavity = beta * std::sqrt(1 - t) * std::sqrt(q) * (z1 * 1 + z2 * -1);
  CHECK(path_energy_2({t, z1, z2, q}, {beta, h, 3}, d, s) == doctest::Approx(pairs + fields + cavity).epsilon(1e-14));

  // one-coordinate path scales only the couplings to the last site
  const double pairs1 = c * 0.4 * -1 + std::sqrt(t) * c * (-1.2 + 0.9 * -1);
  const double cavity1 = beta * std::sqrt(1 - t) * std::sqrt(q) * z1;
  CHECK(path_energy_1({t, z1, z2, q}, {beta, h, 3}, d, s) == doctest::Approx(pairs1 + fields + cavity1).epsilon(1e-14));
}

TEST_CASE("cavity factorization at t = 0") {
  const ModelParams p{0.25, 0.3, 7};
  const Disorder d = sample_disorder(12, 7);
  const auto one = correlators(gibbs_from_form(path_form(CavityPath::one, {0.0, 0.8, 0.0, 0.2}, p, d)));
  const ConfigCode last = 1U << 6, prev = 1U << 5;
  for (ConfigCode a = 0; a < last; ++a) CHECK(std::abs(one[a | last] - one[a] * one[last]) < 1e-13);
  const auto two = correlators(gibbs_from_form(path_form(CavityPath::two, {0.0, 0.8, -0.5, 0.2}, p, d)));
  for (ConfigCode a = 0; a < prev; ++a) {
    CHECK(std::abs(two[a | last | prev] - two[a] * two[last] * two[prev]) < 1e-13);
    CHECK(std::abs(two[a | prev] - two[a] * two[prev]) < 1e-13);
  }
}

TEST_CASE("nu_t anchors") {
  const WeightVector w = WeightVector::uniform(3);
  SUBCASE("t = 0, sbar_N sbar_1 vanishes") {
    const ModelParams p{0.2, 0.3, 3};
    const double q = solve_q(0.2, 0.3).q;
    for (CavityPath path : {CavityPath::one, CavityPath::two}) {
      const Estimate e = nu_t(make_observable("sbar-n-sbar-1", w, q).poly, path, 0.0, p, q, small_quadrature());
      CHECK(std::abs(e.value) < 1e-13);
    }
  }
  SUBCASE("t = 0, (sbar_N)^2 at h = 0 is 2") {
    const Estimate e = nu_t(make_observable("sbar-n-sq", w, 0.0).poly, CavityPath::one, 0.0, {0.2, 0.0, 3}, 0.0,
                            small_quadrature());
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("t = 1 matches disorder averaging") {
    const ModelParams p{0.2, 0.3, 6};
    const double q = solve_q(0.2, 0.3).q;
    const WeightVector w6 = WeightVector::uniform(6);
    ExpectationPlan plan = monte_carlo(100);
    const Estimate path = nu_t(make_observable("s1-sq", w6, q).poly, CavityPath::one, 1.0, p, q, plan);
    DisorderPlan dp;
    dp.n_disorders = 100;
    dp.base_seed = 99;
    const Estimate direct = nu(observables::y_moment(2), p, w6, dp);
    CHECK(std::abs(path.value - direct.value) < 3 * std::hypot(path.stderr_, direct.stderr_));
  }
  SUBCASE("constant observable and errors") {
    CHECK(nu_t(ReplicaPolynomial::constant(3, 1, 1.0), CavityPath::two, 0.4, {0.2, 0.3, 3}, 0.1, small_quadrature())
              .value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(nu_t(ReplicaPolynomial::constant(3, 7, 1.0), CavityPath::one, 0.4, {0.2, 0.3, 3}, 0.1,
                         small_quadrature()),
                    InvalidArgument);
    CHECK_THROWS_AS(nu_t(ReplicaPolynomial::constant(5, 1, 1.0), CavityPath::one, 0.4, {0.2, 0.3, 5}, 0.1,
                         small_quadrature()),
                    CapacityError);
  }
}

TEST_CASE("analytic derivative structure") {
  const ModelParams p{0.2, 0.3, 3};
  const double q = solve_q(0.2, 0.3).q;
  const auto plan = small_quadrature();
  const ReplicaPolynomial one = ReplicaPolynomial::constant(3, 1, 1.0);
  CHECK(std::abs(analytic_derivative_1(one, 0.3, p, q, plan).total.value) < 1e-14);
  const DerivativeEstimate d2 = analytic_derivative_2(one, 0.3, p, q, plan);
  CHECK(std::abs(d2.total.value) < 1e-14);
  CHECK(std::abs(d2.part_i.value + d2.part_ii.value + d2.part_iii.value - d2.total.value) < 1e-15);

  const auto f = make_observable("sigma-n-sigma-nm1", WeightVector::uniform(3), q).poly;
  const ModelParams p0{0.0, 0.3, 3};
  CHECK(analytic_derivative_1(f, 0.5, p0, 0.0, plan).total.value == 0.0);
  CHECK(analytic_derivative_2(f, 0.5, p0, 0.0, plan).total.value == 0.0);
  CHECK_THROWS_AS(analytic_derivative_1(f, 1.0, p, q, plan), InvalidArgument);
  CHECK_THROWS_AS(analytic_derivative_2(f, -0.1, p, q, plan), InvalidArgument);
  // the one-coordinate formula has no II or III pieces
  const DerivativePolynomials polys = derivative_polynomials(f, CavityPath::one, 0.2, q);
  CHECK(polys.part_ii.is_zero());
  CHECK(polys.part_iii.is_zero());
}

TEST_CASE("derivatives match finite differences (reduced grid)") {
  const ModelParams p{0.2, 0.3, 3};
  const double q = solve_q(0.2, 0.3).q;
  const WeightVector w = WeightVector::uniform(3);
  std::vector<ReplicaObservable> obs;
  for (const char* name : {"s1-sq", "sigma-n-sigma-nm1", "overlap-12"}) obs.push_back(make_observable(name, w, q));
  const double ts[] = {0.25, 0.75};
  for (CavityPath path : {CavityPath::one, CavityPath::two}) {
    for (const auto& c : check_derivatives(obs, path, ts, p, q, small_quadrature(6))) {
      CHECK(std::abs(c.difference.value) < 1e-8);
      CHECK(std::abs(c.richardson.value - c.analytic.total.value) < 1e-8);
    }
  }
}

TEST_CASE("III scales as 1/N") {
  const double q = solve_q(0.2, 0.3).q;
  auto part_iii = [&](int n) {
    const auto f = make_observable("sigma-n-sigma-nm1", WeightVector::uniform(n), q).poly;
    return analytic_derivative_2(f, 0.0, {0.2, 0.3, n}, q, monte_carlo(2, 8)).part_iii.value;
  };
  const double ratio = part_iii(6) / part_iii(12);
  CHECK(std::abs(ratio - 2.0) < 0.5);
}

TEST_CASE("Taylor remainder of the constant observable") {
  const ReplicaPolynomial one = ReplicaPolynomial::constant(3, 1, 1.0);
  for (int order : {0, 1}) {
    const TaylorReport r = taylor_remainder_check(one, order, CavityPath::one, {0.2, 0.3, 3}, 0.1, small_quadrature());
    CHECK(std::abs(r.remainder.value) < 1e-14);
  }
  CHECK_THROWS_AS(taylor_remainder_check(one, 2, CavityPath::one, {0.2, 0.3, 3}, 0.1, small_quadrature()),
                  InvalidArgument);
}

TEST_CASE("Taylor remainder stays under the N^-1 envelope") {
  // Monte Carlo noise at this budget is larger than the remainder itself, so the
  // decay exponent is only reported; the check is that every remainder is
  // compatible with a small multiple of N^-1 nu(f^2)^(1/2).
  const double q = solve_q(0.2, 0.3).q;
  const int ns[] = {6, 8, 10, 12};
  ExpectationPlan plan = monte_carlo(24, 8);
  plan.antithetic = true;
  const TaylorSweep sweep = taylor_remainder_sweep(
      [&](int n) { return make_observable("sbar-n-sbar-1", WeightVector::uniform(n), q).poly; }, 1, CavityPath::one,
      0.2, 0.3, q, ns, plan);
  MESSAGE("decay exponent " << sweep.decay_exponent << ", constant " << sweep.fitted_constant);
  for (const auto& row : sweep.rows) {
    const double envelope = 0.1 * std::sqrt(row.f_squared.value) / row.n_spins;
    CHECK(std::abs(row.remainder.value) <= envelope + 4.0 * row.remainder.stderr_);
    CHECK(std::abs(row.remainder.value) <=
          sweep.fitted_constant * std::pow(row.n_spins, -1.0) * std::sqrt(row.f_squared.value) * (1 + 1e-12));
  }
}

TEST_CASE("two-coordinate overlap chain") {
  const double q = solve_q(0.2, 0.3).q;
  std::vector<double> ratios;
  for (int n : {6, 8, 10}) {
    const CavityOverlapReport r = cavity_overlap_chain({0.2, 0.3, n}, q, monte_carlo(16, 6));
    ratios.push_back(r.ratio);
    CHECK(r.ratio > 0.0);
    // |R - R^=| <= 2/N, so the centered second moments differ by O(1/N)
    CHECK(std::abs(r.full_minus_trunc.value) < 8.0 / n);
  }
  CHECK(*std::max_element(ratios.begin(), ratios.end()) < 2.0 * *std::min_element(ratios.begin(), ratios.end()));
}
