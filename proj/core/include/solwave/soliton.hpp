#pragma once

#include <span>
#include <vector>

#include "solwave/grid.hpp"

namespace solwave {

/// Frequency of a solitary wave; valid range (0, 3/16).
struct SolitonParams {
  double omega;
};

/// Full symmetry-group parameters of a traveling wave.
struct FullParams {
  double omega = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;
};

constexpr double kOmegaSup = 3.0 / 16.0;

void validate_omega(double omega);

/// a_omega = sqrt(1 - 16*omega/3), decreasing on (0, 3/16); accepts the
/// closed endpoint 3/16 where it vanishes.
double a_omega(double omega);

/// Pointwise evaluators for phi_omega, Lambda_omega = omega * d(phi)/d(omega)
/// and their x-derivatives. Everything is closed-form; the tail-sensitive
/// ratios R = phi'/phi and T = Lambda/phi are evaluated directly so they stay
/// accurate where phi underflows.
class SolitonShape {
 public:
  explicit SolitonShape(double omega);

  double omega() const { return omega_; }
  double a() const { return a_; }

  double phi(double x) const;
  double dphi(double x) const;
  double d2phi(double x) const;  // from phi'' = omega*phi - phi^3 + phi^5
  double ratio(double x) const;  // R = phi'/phi = -a sqrt(w) sinh/(1+a cosh)
  double lambda_over_phi(double x) const;   // T = Lambda/phi
  double dlambda_over_phi(double x) const;  // T'
  double lambda(double x) const;            // T * phi
  double dlambda(double x) const;           // T'*phi + T*phi'
  double d2lambda(double x) const;  // from L+ Lambda = -omega*phi

 private:
  double omega_;
  double a_;
  double sqrt_w_;
};

/// Samples phi_omega on the grid. Records a diagnostics warning when the box
/// is too narrow (sqrt(omega)*L/2 < 40).
RealField phi_profile(double omega, const Grid& g);
RealField phi_derivative_profile(double omega, const Grid& g);
RealField phi_second_derivative_profile(double omega, const Grid& g);
RealField lambda_profile(double omega, const Grid& g);
RealField lambda_derivative_profile(double omega, const Grid& g);

struct Lemma1Entry {
  double omega;
  double c_phi[3];     // sup |phi^(k)| * w^{-(1+k)/2} e^{sqrt(w)|x|}, k<=2
  double c_lambda[3];  // same for Lambda with the extra (1+sqrt(w)|x|)^-1
  double pairing_over_sqrt_omega;  // <phi, Lambda>/sqrt(omega)
};

struct Lemma1Report {
  std::vector<Lemma1Entry> entries;
  double inf_pairing_over_sqrt_omega;
};

Lemma1Report lemma1_constants(std::span<const double> omegas, const Grid& g);

}  // namespace solwave
