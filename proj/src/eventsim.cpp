#include "seqmeas/eventsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace seqmeas::eventsim {

namespace {

constexpr double kNanosPerSecond = 1e9;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double bloch_angle(double theta, epr::Leg leg, Convention convention) {
  return epr::AngleSetting(theta, leg, convention).bloch_angle();
}

double seconds(long long ticks) { return static_cast<double>(ticks) / kNanosPerSecond; }

}  // namespace

const char* to_string(Branch branch) noexcept {
  return branch == Branch::first_clicked_1 ? "first_clicked_1" : "first_clicked_2";
}

void SimConfig::validate() const {
  if (std::isnan(window_delta) || window_delta < 0.0) {
    throw std::invalid_argument("window_delta must be nonnegative");
  }
  if (!(jitter_sigma > 0.0) || !std::isfinite(jitter_sigma)) {
    throw std::invalid_argument("jitter_sigma must be positive and finite");
  }
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
    throw std::invalid_argument("detector_efficiency must lie in (0, 1]");
  }
  if (std::isnan(tie_epsilon) || tie_epsilon < 0.0) {
    throw std::invalid_argument("tie_epsilon must be nonnegative");
  }
  if (tie_epsilon > 0.0 && window_delta > 0.0 && !(tie_epsilon < window_delta)) {
    throw std::invalid_argument("tie_epsilon must be smaller than window_delta");
  }
  if (!(emission_period > 0.0) || !std::isfinite(emission_period)) {
    throw std::invalid_argument("emission_period must be positive and finite");
  }
  if (!std::isfinite(theta_a) || !std::isfinite(theta_b)) {
    throw std::invalid_argument("analyzer angles must be finite");
  }
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t pair_id) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(pair_id + 0x632be59bd9b4e019ULL));
}

PairRng pair_rng(std::uint64_t seed, std::uint64_t pair_id) {
  return PairRng(substream_seed(seed, pair_id));
}

double ConditionalMeasure::probability_plus(double own_bloch_angle) const noexcept {
  return 0.5 * (1.0 - alpha_ * std::cos(own_bloch_angle - axis_));
}

EventRecord sample_pair(PairRng& rng, const SimConfig& config, std::uint64_t pair_id,
                        const SettingReadHook& hook) {
  auto read_setting = [&](SamplerStage stage, Side reader, Side owner) {
    if (hook) hook(stage, reader, owner);
    return owner == Side::one ? bloch_angle(config.theta_a, epr::Leg::first, config.convention)
                              : bloch_angle(config.theta_b, epr::Leg::second, config.convention);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, config.jitter_sigma * kNanosPerSecond);

  // Exact ties have probability zero for continuous jitter; the 1 ns grid would
  // otherwise manufacture them, so a tied draw is redrawn.
  const double t0 = std::round(static_cast<double>(pair_id + 1) * config.emission_period * kNanosPerSecond);
  long long tick1 = 0;
  long long tick2 = 0;
  do {
    tick1 = std::llround(t0 + jitter(rng));
    tick2 = std::llround(t0 + jitter(rng));
  } while (tick1 == tick2);

  const Side first = tick1 < tick2 ? Side::one : Side::two;
  const Side second = first == Side::one ? Side::two : Side::one;

  const double first_axis = read_setting(SamplerStage::first_measurement, first, first);
  const int alpha = unit(rng) < 0.5 ? +1 : -1;
  const ConditionalMeasure branch_measure(first_axis, alpha);

  const double own_axis = read_setting(SamplerStage::second_measurement, second, second);
  const int beta = unit(rng) < branch_measure.probability_plus(own_axis) ? +1 : -1;

  const bool keep1 = unit(rng) < config.detector_efficiency;
  const bool keep2 = unit(rng) < config.detector_efficiency;

  EventRecord rec;
  rec.pair_id = pair_id;
  rec.branch = first == Side::one ? Branch::first_clicked_1 : Branch::first_clicked_2;
  const int out1 = first == Side::one ? alpha : beta;
  const int out2 = first == Side::one ? beta : alpha;
  if (keep1) {
    rec.t1 = seconds(tick1);
    rec.outcome1 = out1;
  }
  if (keep2) {
    rec.t2 = seconds(tick2);
    rec.outcome2 = out2;
  }
  return rec;
}

std::vector<EventRecord> run_experiment(const SimConfig& config, unsigned workers) {
  config.validate();
  std::vector<EventRecord> events(config.n_pairs);
  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t id = begin; id < end; ++id) {
      PairRng rng = pair_rng(config.seed, id);
      events[id] = sample_pair(rng, config, id);
    }
  };

  const std::uint64_t n = config.n_pairs;
  const unsigned count = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(n, 1)));
  if (count <= 1) {
    fill(0, n);
    return events;
  }
  {
    std::vector<std::jthread> threads;
    threads.reserve(count);
    const std::uint64_t chunk = (n + count - 1) / count;
    for (unsigned w = 0; w < count; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(n, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(n, begin + chunk);
      threads.emplace_back(fill, begin, end);
    }
  }
  return events;
}

CoincidenceStats match_coincidences(const std::vector<EventRecord>& events, const SimConfig& config) {
  CoincidenceStats stats;
  stats.n_pairs = events.size();
  for (const auto& e : events) {
    if (!e.t1 || !e.t2 || !e.outcome1 || !e.outcome2) {
      ++stats.n_unmatched;
      continue;
    }
    const double dt = std::abs(*e.t1 - *e.t2);
    if (!(dt <= config.window_delta)) {
      ++stats.n_unmatched;
      continue;
    }
    if (dt <= config.tie_epsilon) {
      ++stats.n_simultaneous;
    } else if (*e.t1 < *e.t2) {
      ++stats.n_g12;
    } else {
      ++stats.n_g21;
    }
    ++stats.counts[*e.outcome1 > 0 ? 0 : 1][*e.outcome2 > 0 ? 0 : 1];
  }

  const std::uint64_t matched = stats.n_matched();
  if (matched > 0) {
    const double agree = static_cast<double>(stats.counts[0][0] + stats.counts[1][1]);
    const double disagree = static_cast<double>(stats.counts[0][1] + stats.counts[1][0]);
    const double e_hat = (agree - disagree) / static_cast<double>(matched);
    stats.e_hat = e_hat;
    stats.std_err = std::sqrt(std::max(0.0, 1.0 - e_hat * e_hat) / static_cast<double>(matched));
  }
  return stats;
}

EmpiricalCorrelation empirical_correlation(const SimConfig& config, unsigned workers) {
  if (config.n_pairs == 0) throw std::invalid_argument("empirical_correlation: n_pairs must be >= 1");
  const auto events = run_experiment(config, workers);
  auto stats = match_coincidences(events, config);
  return {stats.e_hat, stats.std_err, stats};
}

}  // namespace seqmeas::eventsim
