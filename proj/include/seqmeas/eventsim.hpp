#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "seqmeas/eprbohm.hpp"

namespace seqmeas::eventsim {

using epr::Convention;

enum class Side { one, two };
enum class Branch { first_clicked_1, first_clicked_2 };

const char* to_string(Branch branch) noexcept;

struct SimConfig {
  std::uint64_t n_pairs = 0;
  double theta_a = 0.0;  // analyzer on side 1, radians
  double theta_b = 0.0;  // analyzer on side 2, radians
  double window_delta = 1e-5;
  double jitter_sigma = 1e-6;
  double detector_efficiency = 1.0;
  std::uint64_t seed = 0;
  Convention convention = Convention::spin_half;
  double tie_epsilon = 0.0;
  // Spacing of emission times t0 = (pair_id + 1) * emission_period.
  double emission_period = 1e-4;

  // Throws std::invalid_argument on: negative or NaN window, sigma <= 0,
  // efficiency outside (0, 1], negative tie_epsilon, tie_epsilon >= window > 0,
  // non-positive emission period.
  void validate() const;
};

/// One emitted pair. Click times are seconds on a 1 ns grid; a side whose
/// detector did not fire has neither time nor outcome.
struct EventRecord {
  std::uint64_t pair_id = 0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<int> outcome1;
  std::optional<int> outcome2;
  Branch branch = Branch::first_clicked_1;

  bool operator==(const EventRecord&) const = default;
};

struct CoincidenceStats {
  // counts[i][j]: i indexes outcome1 (0 -> +1, 1 -> -1), j indexes outcome2.
  std::array<std::array<std::uint64_t, 2>, 2> counts{};
  std::uint64_t n_pairs = 0;
  std::uint64_t n_g12 = 0;
  std::uint64_t n_g21 = 0;
  std::uint64_t n_simultaneous = 0;
  std::uint64_t n_unmatched = 0;
  // Empty when no pair was matched ("no data").
  std::optional<double> e_hat;
  std::optional<double> std_err;

  std::uint64_t n_matched() const noexcept { return n_g12 + n_g21 + n_simultaneous; }
  bool operator==(const CoincidenceStats&) const = default;
};

/// Seed of the private generator for one pair, a SplitMix64 mix of (seed, pair_id).
/// Pairs never share generator state, so any partition of the run gives the same records.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t pair_id) noexcept;

using PairRng = std::mt19937_64;
PairRng pair_rng(std::uint64_t seed, std::uint64_t pair_id);

/// The measure handed to the particle that clicks second, fixed by the first
/// click's analyzer and outcome alone:
/// P(β = +1) = ½ (1 - α cos(own - first)) on the Bloch circle.
class ConditionalMeasure {
 public:
  ConditionalMeasure(double first_bloch_angle, int first_outcome) noexcept
      : axis_(first_bloch_angle), alpha_(first_outcome) {}

  double probability_plus(double own_bloch_angle) const noexcept;
  int first_outcome() const noexcept { return alpha_; }

 private:
  double axis_;
  int alpha_;
};

enum class SamplerStage { first_measurement, second_measurement };

/// Observer for every analyzer-setting read the sampler performs: which stage,
/// which side asked, and whose setting it was.
using SettingReadHook = std::function<void(SamplerStage stage, Side reader, Side owner)>;

/// Draws one pair: jittered click times, first outcome a fair coin, second
/// outcome from the ConditionalMeasure, then independent per-side losses.
EventRecord sample_pair(PairRng& rng, const SimConfig& config, std::uint64_t pair_id,
                        const SettingReadHook& hook = {});

/// All n_pairs records in pair order. `workers` > 1 splits the range across
/// threads; the output does not depend on it.
std::vector<EventRecord> run_experiment(const SimConfig& config, unsigned workers = 1);

CoincidenceStats match_coincidences(const std::vector<EventRecord>& events, const SimConfig& config);

struct EmpiricalCorrelation {
  std::optional<double> e_hat;
  std::optional<double> std_err;
  CoincidenceStats stats;
};

EmpiricalCorrelation empirical_correlation(const SimConfig& config, unsigned workers = 1);

}  // namespace seqmeas::eventsim
