#include "seqmeas/eprbohm.hpp"

#include <cmath>
#include <numbers>

#include "seqmeas/error.hpp"
#include "seqmeas/sequential.hpp"

namespace seqmeas::epr {

using hilbert::Complex;
using hilbert::ComplexMatrix;

namespace {

void require_leg(const AngleSetting& s, Leg expected, const char* what) {
  if (s.particle() != expected) {
    throw LegMismatchError(std::string(what) + ": setting at angle " + std::to_string(s.angle()) +
                           " is on the " + to_string(s.particle()) + " leg, expected " +
                           to_string(expected));
  }
}

// Index of the eigenvalue +1 / -1 in a leg observable (eigenvalues sorted ascending).
constexpr std::size_t kMinusIndex = 0;
constexpr std::size_t kPlusIndex = 1;

}  // namespace

const char* to_string(Leg leg) noexcept { return leg == Leg::first ? "first" : "second"; }

const char* to_string(Convention convention) noexcept {
  return convention == Convention::spin_half ? "spin_half" : "photon";
}

double normalize_angle(double radians) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

AngleSetting::AngleSetting(double angle, Leg particle, Convention convention)
    : angle_(normalize_angle(angle)), particle_(particle), convention_(convention) {
  if (!std::isfinite(angle)) throw std::invalid_argument("AngleSetting: angle must be finite");
}

double AngleSetting::bloch_angle() const noexcept {
  return convention_ == Convention::photon ? 2.0 * angle_ : angle_;
}

StateVector singlet_state() {
  const double h = 1.0 / std::numbers::sqrt2;
  return StateVector::normalized({0.0, h, -h, 0.0});
}

SpectralDecomposition leg_observable(const AngleSetting& setting) {
  const double t = setting.bloch_angle();
  const ComplexMatrix local = Complex(std::cos(t)) * hilbert::pauli_z() +
                              Complex(std::sin(t)) * hilbert::pauli_x();
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix full = setting.particle() == Leg::first ? hilbert::tensor_product(local, id)
                                                              : hilbert::tensor_product(id, local);
  return hilbert::spectral_decompose(full);
}

double correlation(const AngleSetting& a, const AngleSetting& b) {
  require_leg(a, Leg::first, "correlation");
  require_leg(b, Leg::second, "correlation");
  const auto table = sequential::sequential_joint(singlet_state(), leg_observable(a), leg_observable(b));
  return sequential::covariance(table);
}

ConditionalDecomposition conditional_decomposition(const AngleSetting& a, const AngleSetting& b) {
  require_leg(a, Leg::first, "conditional_decomposition");
  require_leg(b, Leg::second, "conditional_decomposition");
  const StateVector psi = singlet_state();
  const auto obs_a = leg_observable(a);
  const auto obs_b = leg_observable(b);

  auto branch = [&](std::size_t alpha_index, double& p_alpha, double& e_b, double& p_b_plus) {
    p_alpha = sequential::born_probability(psi, obs_a, alpha_index);
    const StateVector collapsed = sequential::luders_collapse(psi, obs_a, alpha_index);
    const auto dist = sequential::born_distribution(collapsed, obs_b);
    e_b = 0.0;
    for (std::size_t j = 0; j < dist.outcomes.size(); ++j) e_b += dist.outcomes[j] * dist.probabilities[j];
    p_b_plus = dist.probabilities[kPlusIndex];
  };

  ConditionalDecomposition d{};
  branch(kPlusIndex, d.p_plus, d.e_b_given_plus, d.p_b_plus_given_plus);
  branch(kMinusIndex, d.p_minus, d.e_b_given_minus, d.p_b_plus_given_minus);
  d.recombined = d.p_plus * d.e_b_given_plus - d.p_minus * d.e_b_given_minus;
  d.correlation = correlation(a, b);
  d.identity_holds = std::abs(d.recombined - d.correlation) <= kDecompositionTol;
  return d;
}

double chsh(const AngleSetting& a, const AngleSetting& a2, const AngleSetting& b,
            const AngleSetting& b2) {
  require_leg(a, Leg::first, "chsh");
  require_leg(a2, Leg::first, "chsh");
  require_leg(b, Leg::second, "chsh");
  require_leg(b2, Leg::second, "chsh");
  return correlation(a, b) - correlation(a, b2) + correlation(a2, b) + correlation(a2, b2);
}

BellReport bell_inequality_report(double a, double b, double c, Convention convention) {
  auto e = [convention](double x, double y) {
    return correlation(AngleSetting(x, Leg::first, convention), AngleSetting(y, Leg::second, convention));
  };
  BellReport r{};
  r.e_ab = e(a, b);
  r.e_bc = e(b, c);
  r.e_ac = e(a, c);

  CorrelationSet set;
  set.set("a", "b", r.e_ab);
  set.set("b", "c", r.e_bc);
  set.set("a", "c", r.e_ac);
  r.paper_form = kolmogorov::evaluate_bell_facet(set, kolmogorov::BellForm::paper);
  r.textbook_form = kolmogorov::evaluate_bell_facet(set, kolmogorov::BellForm::textbook);
  return r;
}

}  // namespace seqmeas::epr
