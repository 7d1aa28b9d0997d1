#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "seqmeas/eventsim.hpp"

using namespace seqmeas::eventsim;

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig base(std::uint64_t n, double ta, double tb, std::uint64_t seed = 1) {
  SimConfig c;
  c.n_pairs = n;
  c.theta_a = ta;
  c.theta_b = tb;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("substream seeds") {
  CHECK(substream_seed(1, 0) == substream_seed(1, 0));
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(substream_seed(1, 0) != substream_seed(2, 0));
  // Swapping the arguments must not collide.
  CHECK(substream_seed(3, 5) != substream_seed(5, 3));
}

TEST_CASE("ConditionalMeasure") {
  const ConditionalMeasure plus(0.0, +1);
  CHECK(plus.probability_plus(0.0) == 0.0);
  CHECK(plus.probability_plus(kPi) == doctest::Approx(1.0));
  CHECK(plus.probability_plus(kPi / 2) == doctest::Approx(0.5));
  const ConditionalMeasure minus(0.0, -1);
  CHECK(minus.probability_plus(0.0) == 1.0);
  CHECK(minus.probability_plus(kPi / 3) == doctest::Approx(0.75));
}

TEST_CASE("SimConfig::validate") {
  auto c = base(10, 0, 0);
  CHECK_NOTHROW(c.validate());
  SUBCASE("negative window") {
    c.window_delta = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("zero sigma") {
    c.jitter_sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("efficiency") {
    c.detector_efficiency = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.detector_efficiency = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("tie epsilon not below window") {
    c.tie_epsilon = c.window_delta;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("infinite window is allowed") {
    c.window_delta = INFINITY;
    CHECK_NOTHROW(c.validate());
  }
  SUBCASE("NaN angle") {
    c.theta_a = NAN;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("determinism and seed sensitivity") {
  const auto c = base(2000, 0.3, 1.2, 42);
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(a == b);
  auto c2 = c;
  c2.seed = 43;
  CHECK(run_experiment(c2) != a);
  CHECK(match_coincidences(a, c) == match_coincidences(b, c));
}

TEST_CASE("worker count does not change the records") {
  const auto c = base(5000, 0.1, 2.0, 9);
  const auto serial = run_experiment(c, 1);
  for (unsigned w : {2u, 3u, 7u, 64u}) CHECK(run_experiment(c, w) == serial);
  CHECK(run_experiment(base(3, 0, 0), 16) == run_experiment(base(3, 0, 0), 1));
}

TEST_CASE("empty runs") {
  const auto c = base(0, 0, 0);
  CHECK(run_experiment(c).empty());
  const auto stats = match_coincidences({}, c);
  CHECK(stats.n_pairs == 0);
  CHECK_FALSE(stats.e_hat.has_value());
  CHECK_THROWS_AS(empirical_correlation(c), std::invalid_argument);
}

TEST_CASE("records are well formed") {
  auto c = base(3000, 0.5, 0.9, 5);
  c.detector_efficiency = 0.7;
  for (const auto& e : run_experiment(c)) {
    CHECK(e.t1.has_value() == e.outcome1.has_value());
    CHECK(e.t2.has_value() == e.outcome2.has_value());
    if (e.outcome1) CHECK(std::abs(*e.outcome1) == 1);
    if (e.outcome2) CHECK(std::abs(*e.outcome2) == 1);
    if (e.t1 && e.t2) {
      CHECK(*e.t1 != *e.t2);
      CHECK((e.branch == Branch::first_clicked_1) == (*e.t1 < *e.t2));
      // Times sit on the nanosecond grid.
      CHECK(std::abs(*e.t1 * 1e9 - std::round(*e.t1 * 1e9)) < 1e-3);
    }
  }
}

TEST_CASE("equal settings are always anticorrelated") {
  for (double theta : {0.0, 0.7, kPi}) {
    auto c = base(20000, theta, theta, 11);
    c.window_delta = INFINITY;
    const auto r = empirical_correlation(c);
    REQUIRE(r.e_hat.has_value());
    CHECK(*r.e_hat == -1.0);
    CHECK(r.stats.counts[0][0] == 0);
    CHECK(r.stats.counts[1][1] == 0);
  }
}

TEST_CASE("first outcome is a fair coin on both branches") {
  auto c = base(40000, 0.0, 1.0, 12);
  const auto events = run_experiment(c);
  std::uint64_t branch1 = 0, plus1 = 0;
  for (const auto& e : events) {
    branch1 += e.branch == Branch::first_clicked_1;
    plus1 += *e.outcome1 > 0;
  }
  const double n = static_cast<double>(events.size());
  // 5 sigma of a fair binomial.
  CHECK(std::abs(branch1 / n - 0.5) < 5 * 0.5 / std::sqrt(n));
  CHECK(std::abs(plus1 / n - 0.5) < 5 * 0.5 / std::sqrt(n));
}

TEST_CASE("detector losses are independent per side") {
  auto c = base(40000, 0.0, 0.0, 13);
  c.detector_efficiency = 0.5;
  std::uint64_t both = 0, one_only = 0, none = 0;
  for (const auto& e : run_experiment(c)) {
    const int present = e.t1.has_value() + e.t2.has_value();
    both += present == 2;
    one_only += present == 1;
    none += present == 0;
  }
  const double n = 40000.0;
  const double tol = 5 * std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(both / n - 0.25) < tol);
  CHECK(std::abs(none / n - 0.25) < tol);
  CHECK(std::abs(one_only / n - 0.5) < 5 * 0.5 / std::sqrt(n));
}

TEST_CASE("time window") {
  auto c = base(5000, 0.2, 1.3, 21);
  const auto events = run_experiment(c);

  SUBCASE("zero window matches nothing") {
    c.window_delta = 0.0;
    const auto s = match_coincidences(events, c);
    CHECK(s.n_matched() == 0);
    CHECK(s.n_unmatched == s.n_pairs);
    CHECK_FALSE(s.e_hat.has_value());
  }
  SUBCASE("matches grow with the window and the counts always add up") {
    std::uint64_t previous = 0;
    for (double delta : {0.0, 1e-9, 1e-7, 5e-7, 1e-6, 2e-6, 5e-6, 1e-5, 1.0, double(INFINITY)}) {
      c.window_delta = delta;
      const auto s = match_coincidences(events, c);
      CHECK(s.n_matched() >= previous);
      CHECK(s.n_g12 + s.n_g21 + s.n_simultaneous + s.n_unmatched == s.n_pairs);
      previous = s.n_matched();
    }
    CHECK(previous == c.n_pairs);
  }
  SUBCASE("tie epsilon routes close clicks to the simultaneous group") {
    c.window_delta = 1.0;
    c.tie_epsilon = 1e-6;
    const auto s = match_coincidences(events, c);
    CHECK(s.n_simultaneous > 0);
    CHECK(s.n_g12 + s.n_g21 + s.n_simultaneous == s.n_pairs);
  }
}

TEST_CASE("std_err formula") {
  auto c = base(10000, 0.0, 1.0, 3);
  c.window_delta = INFINITY;
  const auto r = empirical_correlation(c);
  REQUIRE(r.e_hat);
  const double n = static_cast<double>(r.stats.n_matched());
  CHECK(*r.std_err == doctest::Approx(std::sqrt((1 - *r.e_hat * *r.e_hat) / n)));
}

TEST_CASE("sampler only reads local settings") {
  auto c = base(0, 0.4, 2.2, 8);
  std::uint64_t reads = 0;
  std::uint64_t remote = 0;
  const SettingReadHook hook = [&](SamplerStage, Side reader, Side owner) {
    ++reads;
    remote += reader != owner;
  };
  for (std::uint64_t id = 0; id < 10000; ++id) {
    auto rng = pair_rng(c.seed, id);
    const auto hooked = sample_pair(rng, c, id, hook);
    auto rng2 = pair_rng(c.seed, id);
    CHECK(hooked == sample_pair(rng2, c, id));
  }
  CHECK(reads == 20000);
  CHECK(remote == 0);
}

TEST_CASE("empirical correlation converges to -cos") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int trial = 0; trial < 4; ++trial) {
    auto c = base(50000, angle(rng), angle(rng), 100 + trial);
    c.window_delta = INFINITY;
    const auto r = empirical_correlation(c, 4);
    REQUIRE(r.e_hat);
    const double expected = -std::cos(c.theta_a - c.theta_b);
    CHECK(std::abs(*r.e_hat - expected) <= 4 * *r.std_err + 1e-12);
  }

  auto photon = base(50000, 0.0, kPi / 4, 77);
  photon.window_delta = INFINITY;
  photon.convention = Convention::photon;
  const auto r = empirical_correlation(photon);
  CHECK(std::abs(*r.e_hat) <= 4 * *r.std_err + 1e-12);
}
