#pragma once

#include <string>

#include "seqmeas/hilbert.hpp"
#include "seqmeas/kolmogorov.hpp"

namespace seqmeas::epr {

using hilbert::SpectralDecomposition;
using hilbert::StateVector;

enum class Leg { first, second };

// spin_half: E = -cos(Δθ). photon: polarizer angle θ acts as 2θ on the Bloch circle.
enum class Convention { spin_half, photon };

const char* to_string(Leg leg) noexcept;
const char* to_string(Convention convention) noexcept;

/// An analyzer orientation on one particle of the pair. The angle is stored
/// reduced to [0, 2π).
class AngleSetting {
 public:
  AngleSetting(double angle, Leg particle, Convention convention = Convention::spin_half);

  double angle() const noexcept { return angle_; }
  Leg particle() const noexcept { return particle_; }
  Convention convention() const noexcept { return convention_; }
  // Angle on the Bloch circle: θ for spin_half, 2θ for photon.
  double bloch_angle() const noexcept;

 private:
  double angle_;
  Leg particle_;
  Convention convention_;
};

double normalize_angle(double radians) noexcept;

// (|01> - |10>)/√2
StateVector singlet_state();

/// cosθ Z + sinθ X on the setting's leg, identity on the other.
SpectralDecomposition leg_observable(const AngleSetting& setting);

/// <a(1), b(2)> on the singlet, from the sequential joint table of a then b.
double correlation(const AngleSetting& a, const AngleSetting& b);

/// The covariance split over the outcome of the first measurement:
/// <a,b> = P(a=+1) E[b | a=+1] - P(a=-1) E[b | a=-1].
struct ConditionalDecomposition {
  double p_plus;
  double e_b_given_plus;
  double p_minus;
  double e_b_given_minus;
  // P(b = +1 | a = ±1); the branch measures handed to the second particle.
  double p_b_plus_given_plus;
  double p_b_plus_given_minus;
  double recombined;
  double correlation;
  bool identity_holds;
};

inline constexpr double kDecompositionTol = 1e-10;

ConditionalDecomposition conditional_decomposition(const AngleSetting& a, const AngleSetting& b);

/// S = E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2). a, a2 on the first leg, b, b2 on the second.
double chsh(const AngleSetting& a, const AngleSetting& a2, const AngleSetting& b,
            const AngleSetting& b2);

struct BellReport {
  double e_ab;
  double e_bc;
  double e_ac;
  kolmogorov::InequalityCheck paper_form;
  kolmogorov::InequalityCheck textbook_form;
};

/// Evaluates |E(a,b) - E(b,c)| <= 1 - E(a,c) and |E(a,b) - E(a,c)| <= 1 + E(b,c)
/// on the singlet; E(x,y) always has x on the first particle and y on the second.
BellReport bell_inequality_report(double a, double b, double c,
                                  Convention convention = Convention::spin_half);

}  // namespace seqmeas::epr
