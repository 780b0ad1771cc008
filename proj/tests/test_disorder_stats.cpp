#include <cmath>

#include "doctest.h"
#include "skclt/disorder_stats.hpp"
#include "skclt/error.hpp"
#include "skclt/qsolver.hpp"

using namespace skclt;

namespace {

DisorderPlan plan_with(long m, std::uint64_t seed = 1) {
  DisorderPlan plan;
  plan.n_disorders = m;
  plan.base_seed = seed;
  return plan;
}

}  // namespace

TEST_CASE("nu anchors") {
  const ModelParams p{0.2, 0.3, 8};
  const WeightVector w = WeightVector::uniform(8);
  const Estimate one = nu(observables::constant(1.0), p, w, plan_with(20));
  CHECK(one.value == 1.0);
  CHECK(one.stderr_ == 0.0);
  CHECK(one.n_samples == 20);
  CHECK(nu(observables::y_moment(1), p, w, plan_with(20)).value == 0.0);
  CHECK(nu(observables::y_moment(3), p, w, plan_with(20)).value == 0.0);
  CHECK(nu(observables::replica_product(ReplicaSpec::parse("2;1")), p, w, plan_with(20)).value == 0.0);

  const Estimate r2 = nu(observables::overlap_moment(2), {1e-12, 0.0, 9}, WeightVector::uniform(9), plan_with(30));
  CHECK(std::abs(r2.value - 1.0 / 9) <= 3 * r2.stderr_ + 1e-9);
}

TEST_CASE("reproducible and independent of the worker count") {
  const ModelParams p{0.25, 0.3, 10};
  const WeightVector w = WeightVector::power_law(10, 0.6);
  const DisorderObservable obs[] = {observables::y_moment(4), observables::centered_overlap(0.1, 2),
                                    observables::x_mean()};
  DisorderPlan serial = plan_with(24, 5);
  DisorderPlan threaded = serial;
  threaded.jobs = 4;
  const DisorderSeries a = evaluate_disorders(p, w, serial, obs);
  const DisorderSeries b = evaluate_disorders(p, w, threaded, obs);
  const DisorderSeries c = evaluate_disorders(p, w, serial, obs);
  CHECK(a.values == b.values);
  CHECK(a.values == c.values);
  for (std::size_t k = 0; k < 3; ++k) CHECK(a.estimate(k).value == b.estimate(k).value);
  CHECK(disorder_seed(serial, 3) == derive_seed(5, 3));
}

TEST_CASE("disorder variance") {
  const ModelParams p{0.2, 0.3, 8};
  const WeightVector w = WeightVector::uniform(8);
  CHECK(nu_disorder_variance(observables::y_moment(4), observables::y_moment(4), p, w, plan_with(10)).value == 0.0);
  for (int n : {6, 9, 12}) {
    const DisorderObservable three_sq = [](const DisorderSummary& s) { return 3.0 * s.y[2] * s.y[2]; };
    const Estimate e = nu_disorder_variance(observables::y_moment(4), three_sq, {0.0, 0.0, n},
                                            WeightVector::uniform(n), plan_with(5));
    CHECK(e.value == doctest::Approx(16.0 / (n * n)).epsilon(1e-10));
  }
}

TEST_CASE("centered overlap consistency between engines' formulas") {
  const ModelParams p{0.2, 0.3, 9};
  const WeightVector w = WeightVector::uniform(9);
  DisorderPlan plan = plan_with(4);
  const Disorder d = sample_disorder(disorder_seed(plan, 0), 9);
  DisorderSummary s = summarize_disorder(p, d, w, plan, 0);
  const double from_law = observables::centered_overlap(0.1, 4)(s);
  s.overlap_law.clear();  // forces the binomial expansion over raw moments
  CHECK(observables::centered_overlap(0.1, 4)(s) == doctest::Approx(from_law).epsilon(1e-12));
  CHECK(centered_overlap_moment(exact_gibbs(p, d), 0.1, 4) == doctest::Approx(from_law).epsilon(1e-12));
}

TEST_CASE("polynomial observables need correlators") {
  const ModelParams p{0.2, 0.3, 6};
  const WeightVector w = WeightVector::uniform(6);
  const auto s1 = ReplicaPolynomial::weighted_difference(w, 2, 0, 1);
  DisorderPlan plan = plan_with(6);
  try {
    nu(observables::polynomial(s1 * s1), p, w, plan);
    FAIL("expected a failure without correlators");
  } catch (const DisorderEvaluationError& e) {
    CHECK(std::string(e.code()) == "invalid_argument");
  }
  plan.keep_correlators = true;
  CHECK(nu(observables::polynomial(s1 * s1), p, w, plan).value ==
        doctest::Approx(nu(observables::y_moment(2), p, w, plan).value).epsilon(1e-12));
}

TEST_CASE("failures name the disorder") {
  try {
    nu(observables::y_moment(2), {0.1, 0.0, 21}, WeightVector::uniform(21), plan_with(3));
    FAIL("expected a capacity failure");
  } catch (const DisorderEvaluationError& e) {
    CHECK(e.index() == 0);
    CHECK(std::string(e.code()) == "capacity_exceeded");
  }
  CHECK_THROWS_AS(nu(observables::y_moment(2), {0.1, 0.0, 5}, WeightVector::uniform(4), plan_with(3)), DimensionError);
  CHECK_THROWS_AS(plan_with(0).validate(), InvalidArgument);
}

TEST_CASE("mcmc engine agrees with the exact engine") {
  const ModelParams p{0.2, 0.3, 8};
  const WeightVector w = WeightVector::uniform(8);
  DisorderPlan exact = plan_with(8, 4);
  DisorderPlan mcmc = exact;
  mcmc.engine = Engine::mcmc;
  mcmc.mcmc.schedule = McmcSchedule{20500, 500, 1};
  const DisorderObservable obs[] = {observables::y_moment(2), observables::overlap_moment(2), observables::x_mean()};
  const DisorderSeries a = evaluate_disorders(p, w, exact, obs);
  const DisorderSeries b = evaluate_disorders(p, w, mcmc, obs);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t m = 0; m < 8; ++m) {
      const double rel = std::abs(a.values[k][m] - b.values[k][m]) / std::max(0.1, std::abs(a.values[k][m]));
      CHECK(rel < 0.1);
    }
  }
  CHECK_THROWS_AS(([&] {
                    DisorderPlan bad = mcmc;
                    bad.keep_correlators = true;
                    bad.validate();
                  }()),
                  InvalidArgument);
}

TEST_CASE("moment bound fits") {
  const int ks[] = {1, 2};
  const int ns[] = {6, 8, 10, 12};
  const auto uniform = [](int n) { return WeightVector::uniform(n); };
  const MomentBoundReport r0 = empirical_moment_bound_fit(ks, 0.0, 0.0, 0.0, ns, uniform, plan_with(3));
  for (const auto& row : r0.rows) {
    if (row.k == 1) CHECK(row.overlap_constant == doctest::Approx(1.0).epsilon(1e-12));
    if (row.k == 2) CHECK(row.y.value == doctest::Approx(12.0 - 4.0 / row.n_spins).epsilon(1e-12));
  }
  CHECK(r0.overlap_holdout_holds);
  CHECK(r0.y_holdout_holds);
  // k = 1 gives nu(Y^2) = 2, which dominates sqrt(12 - 4/N) / 2 from k = 2
  CHECK(r0.y_fit == doctest::Approx(2.0).epsilon(1e-12));

  const double q = solve_q(0.2, 0.3).q;
  const MomentBoundReport r = empirical_moment_bound_fit(ks, 0.2, 0.3, q, ns, uniform, plan_with(40));
  CHECK(r.overlap_holdout_holds);
  CHECK(r.y_holdout_holds);
  CHECK(r.overlap_fit < 2.0);
  const int bad[] = {5};
  CHECK_THROWS_AS(empirical_moment_bound_fit(bad, 0.2, 0.3, q, ns, uniform, plan_with(2)), InvalidArgument);
}
