#include <cmath>
#include <numeric>

#include "doctest.h"
#include "skclt/error.hpp"
#include "skclt/model.hpp"
#include "support/oracles.hpp"

using namespace skclt;

TEST_CASE("sample_disorder shapes and determinism") {
  CHECK(sample_disorder(7, 1).couplings().empty());
  const Disorder a = sample_disorder(7, 4);
  const Disorder b = sample_disorder(7, 4);
  REQUIRE(a.couplings().size() == 6);
  CHECK(std::equal(a.couplings().begin(), a.couplings().end(), b.couplings().begin()));
  CHECK(a.seed() == 7);
  CHECK_FALSE(sample_disorder(8, 4).couplings()[0] == a.couplings()[0]);
}

TEST_CASE("sample_disorder moments at N = 400") {
  const Disorder d = sample_disorder(7, 400);
  const auto g = d.couplings();
  REQUIRE(g.size() == 79800);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
  double var = 0.0;
  for (double x : g) var += (x - mean) * (x - mean);
  var /= g.size() - 1;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(79800.0));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("energy hand values") {
  CHECK(energy({1.0, 0.4, 1}, sample_disorder(3, 1), SpinConfig({1})) == doctest::Approx(0.4).epsilon(1e-15));
  const Disorder d(2, {0.5}, 0);
  CHECK(energy({1.0, 0.1, 2}, d, SpinConfig({1, 1})) == doctest::Approx(0.5 / std::sqrt(2.0) + 0.2).epsilon(1e-15));
  CHECK(energy({1.0, 0.1, 2}, d, SpinConfig({1, -1})) == doctest::Approx(-0.5 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("energy is even under a global flip at h = 0") {
  const ModelParams p{0.7, 0.0, 6};
  const Disorder d = sample_disorder(11, 6);
  for (ConfigCode c = 0; c < 64; ++c) {
    const SpinConfig s = SpinConfig::from_code(c, 6);
    CHECK(energy(p, d, s) == doctest::Approx(energy(p, d, s.flipped())).epsilon(1e-14));
  }
}

TEST_CASE("energy rejects mismatched dimensions") {
  CHECK_THROWS_AS(energy({0.2, 0.0, 3}, sample_disorder(1, 3), SpinConfig({1, 1})), DimensionError);
  CHECK_THROWS_AS(energy({0.2, 0.0, 3}, sample_disorder(1, 4), SpinConfig({1, 1, 1})), DimensionError);
}

TEST_CASE("config codes round trip") {
  for (ConfigCode c = 0; c < 32; ++c) CHECK(SpinConfig::from_code(c, 5).code() == c);
  CHECK_THROWS_AS(SpinConfig({1, 0, -1}), InvalidArgument);
  CHECK(SpinConfig::from_code(0b101, 3)[0] == 1);
  CHECK(SpinConfig::from_code(0b101, 3)[1] == -1);
}

TEST_CASE("exact_gibbs small cases") {
  SUBCASE("near-zero beta is uniform") {
    const GibbsTable t = exact_gibbs({1e-12, 0.0, 3}, sample_disorder(5, 3));
    for (double p : t.probs()) CHECK(std::abs(p - 0.125) < 1e-9);
  }
  SUBCASE("N = 2 hand table") {
    const double g = 0.8;
    const ModelParams p{0.2, 0.3, 2};
    const GibbsTable t = exact_gibbs(p, Disorder(2, {g}, 0));
    const double j = 0.2 / std::sqrt(2.0) * g;
    // codes: 0 = (-,-), 1 = (+,-), 2 = (-,+), 3 = (+,+)
    const double w[4] = {std::exp(j - 0.6), std::exp(-j), std::exp(-j), std::exp(j + 0.6)};
    const double z = w[0] + w[1] + w[2] + w[3];
    for (int c = 0; c < 4; ++c) CHECK(t.prob(c) == doctest::Approx(w[c] / z).epsilon(1e-14));
    CHECK(t.log_z() == doctest::Approx(std::log(z)).epsilon(1e-14));
  }
  SUBCASE("matches the direct oracle and sums to one") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ModelParams p{0.25, 0.4, 9};
      const Disorder d = sample_disorder(seed, 9);
      const GibbsTable t = exact_gibbs(p, d);
      const auto ref = oracle::gibbs_probs(p, d);
      double sum = 0.0;
      for (std::size_t c = 0; c < ref.size(); ++c) {
        CHECK(std::abs(t.prob(static_cast<ConfigCode>(c)) - ref[c]) < 1e-14);
        sum += t.prob(static_cast<ConfigCode>(c));
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
  SUBCASE("large exponents do not overflow") {
    const GibbsTable t = exact_gibbs({1.0, 60.0, 12}, sample_disorder(3, 12));
    CHECK(t.prob((1U << 12) - 1) == doctest::Approx(1.0));
    CHECK(std::isfinite(t.log_z()));
  }
  SUBCASE("capacity") {
    CHECK_THROWS_AS(exact_gibbs({0.1, 0.0, 21}, sample_disorder(1, 21)), CapacityError);
    try {
      exact_gibbs({0.1, 0.0, 12}, sample_disorder(1, 12), 10);
    } catch (const CapacityError& e) {
      CHECK(e.requested() == 12);
      CHECK(e.ceiling() == 10);
      CHECK(std::string(e.code()) == "capacity_exceeded");
    }
  }
  SUBCASE("bit-identical for identical inputs") {
    const GibbsTable a = exact_gibbs({0.2, 0.3, 10}, sample_disorder(9, 10));
    const GibbsTable b = exact_gibbs({0.2, 0.3, 10}, sample_disorder(9, 10));
    CHECK(std::equal(a.probs().begin(), a.probs().end(), b.probs().begin()));
  }
}

TEST_CASE("single replica expectations") {
  const GibbsTable t0 = exact_gibbs({0.3, 0.0, 7}, sample_disorder(2, 7));
  CHECK(single_replica_expectation(t0, [](const SpinConfig&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-15));
  const auto m = magnetizations(t0);
  for (double b : m) CHECK(std::abs(b) < 1e-14 * 128);
  CHECK(single_replica_expectation(t0, [](const SpinConfig& s) { return static_cast<double>(s[0]); }) ==
        doctest::Approx(0.0));

  const GibbsTable t1 = exact_gibbs({1e-12, 0.4, 5}, sample_disorder(2, 5));
  CHECK(std::abs(magnetizations(t1)[0] - std::tanh(0.4)) < 1e-9);
  // independent spins: <sigma_A> = tanh(h)^|A|
  const double triple = single_replica_expectation(t1, [](const SpinConfig& s) { return 1.0 * s[0] * s[2] * s[4]; });
  CHECK(std::abs(triple - std::pow(std::tanh(0.4), 3)) < 1e-9);
}

TEST_CASE("flip symmetry of the measure at h = 0") {
  const GibbsTable t = exact_gibbs({0.25, 0.0, 8}, sample_disorder(4, 8));
  const ConfigCode all = (1U << 8) - 1;
  for (ConfigCode c = 0; c <= all; ++c) CHECK(t.prob(c) == doctest::Approx(t.prob(all ^ c)).epsilon(1e-13));
}

TEST_CASE("weight vectors") {
  const WeightVector u = WeightVector::uniform(16);
  CHECK(u.max_abs() == doctest::Approx(0.25));
  CHECK(WeightVector::one_hot(5).max_abs() == 1.0);
  const WeightVector pl = WeightVector::power_law(10, 1.0);
  double norm = 0.0;
  for (double t : pl.values()) norm += t * t;
  CHECK(std::abs(norm - 1.0) < 1e-12);
  CHECK(pl[0] / pl[1] == doctest::Approx(2.0));
  CHECK(pl.max_abs() == pl[0]);
  try {
    WeightVector::explicit_values({std::sqrt(0.45), std::sqrt(0.45)});
    FAIL("expected rejection");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("0.9") != std::string::npos);
  }
  CHECK(parse_weight_profile("one-hot") == WeightProfile::one_hot);
  CHECK(to_string(WeightProfile::power_law) == "power-law");
  CHECK_THROWS_AS(parse_weight_profile("flat"), InvalidArgument);
}

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW(ModelParams{0.0, 0.0, 4}.validate());
  CHECK_THROWS_AS((ModelParams{-0.1, 0.0, 4}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.1, -0.5, 4}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.1, 0.0, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.3, 0.0, 4}.validate(kDefaultHighTempCeiling)), InvalidArgument);
}
