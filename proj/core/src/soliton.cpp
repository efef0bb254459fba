#include "solwave/soliton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace solwave {

void validate_omega(double omega) {
  if (!(omega > 0.0 && omega < kOmegaSup) || !std::isfinite(omega))
    throw std::invalid_argument("omega must lie in (0, 3/16), got " +
                                std::to_string(omega));
}

double a_omega(double omega) {
  if (!(omega > 0.0 && omega <= kOmegaSup))
    throw std::invalid_argument("a_omega: omega must lie in (0, 3/16]");
  return std::sqrt(1.0 - 16.0 * omega / 3.0);
}

SolitonShape::SolitonShape(double omega) : omega_(omega) {
  validate_omega(omega);
  a_ = a_omega(omega);
  sqrt_w_ = std::sqrt(omega);
}

double SolitonShape::phi(double x) const {
  const double D = 1.0 + a_ * std::cosh(2.0 * sqrt_w_ * x);
  return 2.0 * sqrt_w_ / std::sqrt(D);
}

double SolitonShape::dphi(double x) const {
  const double y = 2.0 * sqrt_w_ * x;
  const double D = 1.0 + a_ * std::cosh(y);
  return -2.0 * omega_ * a_ * std::sinh(y) / (D * std::sqrt(D));
}

double SolitonShape::d2phi(double x) const {
  const double p = phi(x);
  const double p2 = p * p;
  return p * (omega_ - p2 + p2 * p2);
}

double SolitonShape::ratio(double x) const {
  const double y = 2.0 * sqrt_w_ * x;
  return -sqrt_w_ * a_ * std::sinh(y) / (1.0 + a_ * std::cosh(y));
}

double SolitonShape::lambda_over_phi(double x) const {
  const double y = 2.0 * sqrt_w_ * x;
  const double C = std::cosh(y), S = std::sinh(y);
  const double D = 1.0 + a_ * C;
  return 0.5 + (4.0 * omega_ / (3.0 * a_)) * C / D - 0.25 * a_ * y * S / D;
}

double SolitonShape::dlambda_over_phi(double x) const {
  const double y = 2.0 * sqrt_w_ * x;
  const double C = std::cosh(y), S = std::sinh(y);
  const double D = 1.0 + a_ * C;
  // d/dy [C/D] = S/D^2 ; d/dy [yS/D] = ((S + yC)D - a y S^2)/D^2
  const double t1 = (4.0 * omega_ / (3.0 * a_)) * S / (D * D);
  const double t2 = 0.25 * a_ * ((S + y * C) * D - a_ * y * S * S) / (D * D);
  return 2.0 * sqrt_w_ * (t1 - t2);
}

double SolitonShape::lambda(double x) const {
  return lambda_over_phi(x) * phi(x);
}

double SolitonShape::dlambda(double x) const {
  return dlambda_over_phi(x) * phi(x) + lambda_over_phi(x) * dphi(x);
}

double SolitonShape::d2lambda(double x) const {
  const double p = phi(x);
  const double p2 = p * p;
  const double V = omega_ - 3.0 * p2 + 5.0 * p2 * p2;
  return V * lambda(x) + omega_ * p;
}

namespace {

void check_box(double omega, const Grid& g) {
  const double half = 0.5 * g.length * std::sqrt(omega);
  if (half < 40.0)
    diag::warn("soliton: grid too narrow, sqrt(omega)*L/2 = " +
               std::to_string(half) + " < 40; tails wrap above noise level");
}

}  // namespace

RealField phi_profile(double omega, const Grid& g) {
  SolitonShape s(omega);
  check_box(omega, g);
  return make_real_field(g, [&](double x) { return s.phi(x); });
}

RealField phi_derivative_profile(double omega, const Grid& g) {
  SolitonShape s(omega);
  return make_real_field(g, [&](double x) { return s.dphi(x); });
}

RealField phi_second_derivative_profile(double omega, const Grid& g) {
  SolitonShape s(omega);
  return make_real_field(g, [&](double x) { return s.d2phi(x); });
}

RealField lambda_profile(double omega, const Grid& g) {
  SolitonShape s(omega);
  check_box(omega, g);
  return make_real_field(g, [&](double x) { return s.lambda(x); });
}

RealField lambda_derivative_profile(double omega, const Grid& g) {
  SolitonShape s(omega);
  return make_real_field(g, [&](double x) { return s.dlambda(x); });
}

Lemma1Report lemma1_constants(std::span<const double> omegas, const Grid& g) {
  Lemma1Report report;
  report.inf_pairing_over_sqrt_omega = std::numeric_limits<double>::infinity();
  for (double w : omegas) {
    if (!(w > 0.0 && w <= 0.125))
      throw std::invalid_argument("lemma1_constants: omega must lie in (0, 1/8]");
    SolitonShape s(w);
    Lemma1Entry e{};
    e.omega = w;
    const double sw = std::sqrt(w);
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.node(j);
      const double grow = std::exp(sw * std::abs(x));
      const double lam_fac = 1.0 + sw * std::abs(x);
      const double dphi[3] = {s.phi(x), s.dphi(x), s.d2phi(x)};
      const double dlam[3] = {s.lambda(x), s.dlambda(x), s.d2lambda(x)};
      for (int k = 0; k < 3; ++k) {
        const double scale = std::pow(w, -(1.0 + k) / 2.0);
        e.c_phi[k] = std::max(e.c_phi[k], std::abs(dphi[k]) * scale * grow);
        e.c_lambda[k] =
            std::max(e.c_lambda[k], std::abs(dlam[k]) * scale * grow / lam_fac);
      }
    }
    const RealField phi = make_real_field(g, [&](double x) { return s.phi(x); });
    const RealField lam =
        make_real_field(g, [&](double x) { return s.lambda(x); });
    e.pairing_over_sqrt_omega = inner(phi, lam) / sw;
    report.inf_pairing_over_sqrt_omega =
        std::min(report.inf_pairing_over_sqrt_omega, e.pairing_over_sqrt_omega);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace solwave
