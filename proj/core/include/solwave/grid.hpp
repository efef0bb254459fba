#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace solwave {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2), node x_j = -L/2 + j*spacing.
struct Grid {
  std::size_t n = 0;
  double length = 0.0;

  double spacing() const { return length / static_cast<double>(n); }
  double node(std::size_t j) const {
    return -0.5 * length + static_cast<double>(j) * spacing();
  }
  /// Signed Fourier frequency xi_k = 2*pi*k/L for FFT bin index j in [0, n).
  double frequency(std::size_t j) const;
  /// Index of the node at x = 0 (n is required even, so this is exact).
  std::size_t center_index() const { return n / 2; }
  std::vector<double> nodes() const;

  bool operator==(const Grid&) const = default;
};

/// n_points >= 64, even; length > 0.
Grid make_grid(std::size_t n_points, double length);

class Field;

/// Real-valued samples on a grid.
class RealField {
 public:
  RealField() = default;
  explicit RealField(Grid g) : grid_(g), v_(g.n, 0.0) {}
  RealField(Grid g, std::vector<double> v);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t j) { return v_[j]; }
  double operator[](std::size_t j) const { return v_[j]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> v_;
};

/// Complex-valued samples on a grid; u = u1 + i*u2.
class Field {
 public:
  Field() = default;
  explicit Field(Grid g) : grid_(g), v_(g.n, cplx{0.0, 0.0}) {}
  Field(Grid g, std::vector<cplx> v);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  cplx& operator[](std::size_t j) { return v_[j]; }
  const cplx& operator[](std::size_t j) const { return v_[j]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx s);

 private:
  Grid grid_;
  std::vector<cplx> v_;
};

RealField make_real_field(const Grid& g, const std::function<double(double)>& f);
Field make_field(const Grid& g, const std::function<cplx(double)>& f);

Field to_complex(const RealField& f);
RealField real_part(const Field& f);
RealField imag_part(const Field& f);
Field combine(const RealField& re, const RealField& im);

bool all_finite(const RealField& f);
bool all_finite(const Field& f);

/// <u,v> = Re integral of u * conj(v), rectangle rule (spectrally accurate on
/// the periodic grid). Grids must match.
double inner(const Field& u, const Field& v);
double inner(const RealField& u, const RealField& v);
double norm(const Field& u);
double norm(const RealField& u);
double sup_norm(const Field& u);
double sup_norm(const RealField& u);
/// sqrt(||u||^2 + ||u'||^2)
double h1_norm(const Field& u);

/// ||w*u|| with w >= 0 (rejected otherwise).
double weighted_norm(const Field& u, const RealField& w);
double weighted_norm(const RealField& u, const RealField& w);

RealField multiply(const RealField& a, const RealField& b);
Field multiply(const RealField& a, const Field& b);

/// Apply a Fourier multiplier m(xi) bin-by-bin.
Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m);
RealField apply_multiplier_real(const RealField& f,
                                const std::function<cplx(double)>& m);

/// Fourier-multiplier derivative (i xi)^order; order in [1, 5].
Field spectral_derivative(const Field& f, int order);
RealField spectral_derivative(const RealField& f, int order);

/// (1 + alpha xi^2)^(-power); power in {1/2, 1, 2}. Power 1 realizes
/// X_alpha = (1 - alpha d_xx)^{-1}.
Field helmholtz_smooth(const Field& f, double alpha, double power);
RealField helmholtz_smooth(const RealField& f, double alpha, double power);

/// (1 - alpha d_xx)^{+2}: the inverse of power-2 smoothing. Internal helper
/// for transformed-operator checks.
RealField helmholtz_sharpen2(const RealField& f, double alpha);

/// F(x_j) = integral of f from -L/2 to x_j, spectral primitive (mean split off
/// as a linear ramp). Accurate for integrands whose periodization is smooth.
RealField cumulative_integral(const RealField& f);

/// Solve (d/dx + kappa) F = f (direction = +1, decaying-at-left causal
/// integral) or (-d/dx + kappa) F = f (direction = -1), kappa > 0, via the
/// nonsingular multiplier 1/(kappa +- i xi).
RealField solve_first_order(const RealField& f, double kappa, int direction);

/// Fraction of spectral energy in the top octave |xi| >= xi_max/2.
double top_octave_fraction(const Field& f);
double top_octave_fraction(const RealField& f);

/// Parseval sum (1/L)*sum |f_hat_k|^2 * h^2 ... identical to ||f||^2 for the
/// rectangle-rule inner product; exposed for the invariant test.
double spectral_norm_squared(const Field& f);

namespace diag {
/// Append a warning to the process-wide diagnostics log (thread-safe).
void warn(std::string message);
/// Drain and return all recorded warnings.
std::vector<std::string> drain_warnings();
}  // namespace diag

}  // namespace solwave
