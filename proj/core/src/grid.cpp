#include "solwave/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace solwave {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// FFTW plan pair for one size. Plan creation goes through the global planner
/// (not thread-safe); execution on the per-thread buffers is.
class FftEngine {
 public:
  explicit FftEngine(std::size_t n) : n_(n), buf_(n) {
    static std::mutex planner_mutex;
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD,
                            FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD,
                            FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
  }
  ~FftEngine() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  std::vector<cplx>& buffer() { return buf_; }
  void forward() { fftw_execute(fwd_); }
  /// Unnormalized inverse; caller divides by n.
  void backward() { fftw_execute(bwd_); }

 private:
  std::size_t n_;
  std::vector<cplx> buf_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

FftEngine& engine_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftEngine>> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_unique<FftEngine>(n)).first;
  return *it->second;
}

}  // namespace

double Grid::frequency(std::size_t j) const {
  const auto half = n / 2;
  const double k = (j <= half) ? static_cast<double>(j)
                               : static_cast<double>(j) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * k / length;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = node(j);
  return xs;
}

Grid make_grid(std::size_t n_points, double length) {
  require(n_points >= 64, "grid: n_points must be >= 64");
  require(n_points % 2 == 0, "grid: n_points must be even");
  require(length > 0.0 && std::isfinite(length), "grid: length must be > 0");
  return Grid{n_points, length};
}

RealField::RealField(Grid g, std::vector<double> v) : grid_(g), v_(std::move(v)) {
  require(v_.size() == grid_.n, "field: sample count != grid.n_points");
}

Field::Field(Grid g, std::vector<cplx> v) : grid_(g), v_(std::move(v)) {
  require(v_.size() == grid_.n, "field: sample count != grid.n_points");
}

RealField& RealField::operator+=(const RealField& o) {
  require(grid_ == o.grid_, "field: grid mismatch");
  for (std::size_t j = 0; j < v_.size(); ++j) v_[j] += o.v_[j];
  return *this;
}
RealField& RealField::operator-=(const RealField& o) {
  require(grid_ == o.grid_, "field: grid mismatch");
  for (std::size_t j = 0; j < v_.size(); ++j) v_[j] -= o.v_[j];
  return *this;
}
RealField& RealField::operator*=(double s) {
  for (auto& x : v_) x *= s;
  return *this;
}

Field& Field::operator+=(const Field& o) {
  require(grid_ == o.grid_, "field: grid mismatch");
  for (std::size_t j = 0; j < v_.size(); ++j) v_[j] += o.v_[j];
  return *this;
}
Field& Field::operator-=(const Field& o) {
  require(grid_ == o.grid_, "field: grid mismatch");
  for (std::size_t j = 0; j < v_.size(); ++j) v_[j] -= o.v_[j];
  return *this;
}
Field& Field::operator*=(cplx s) {
  for (auto& x : v_) x *= s;
  return *this;
}

RealField make_real_field(const Grid& g, const std::function<double(double)>& f) {
  RealField out(g);
  for (std::size_t j = 0; j < g.n; ++j) out[j] = f(g.node(j));
  return out;
}

Field make_field(const Grid& g, const std::function<cplx(double)>& f) {
  Field out(g);
  for (std::size_t j = 0; j < g.n; ++j) out[j] = f(g.node(j));
  return out;
}

Field to_complex(const RealField& f) {
  Field out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = cplx{f[j], 0.0};
  return out;
}

RealField real_part(const Field& f) {
  RealField out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
  return out;
}

RealField imag_part(const Field& f) {
  RealField out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].imag();
  return out;
}

Field combine(const RealField& re, const RealField& im) {
  require(re.grid() == im.grid(), "combine: grid mismatch");
  Field out(re.grid());
  for (std::size_t j = 0; j < re.size(); ++j) out[j] = cplx{re[j], im[j]};
  return out;
}

bool all_finite(const RealField& f) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [](double x) { return std::isfinite(x); });
}
bool all_finite(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double inner(const Field& u, const Field& v) {
  require(u.grid() == v.grid(), "inner: grid mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    acc += u[j].real() * v[j].real() + u[j].imag() * v[j].imag();
  return acc * u.grid().spacing();
}

double inner(const RealField& u, const RealField& v) {
  require(u.grid() == v.grid(), "inner: grid mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += u[j] * v[j];
  return acc * u.grid().spacing();
}

double norm(const Field& u) { return std::sqrt(inner(u, u)); }
double norm(const RealField& u) { return std::sqrt(inner(u, u)); }

double sup_norm(const Field& u) {
  double m = 0.0;
  for (const auto& z : u.values()) m = std::max(m, std::abs(z));
  return m;
}
double sup_norm(const RealField& u) {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  return m;
}

double h1_norm(const Field& u) {
  const Field du = spectral_derivative(u, 1);
  return std::sqrt(inner(u, u) + inner(du, du));
}

double weighted_norm(const Field& u, const RealField& w) {
  require(u.grid() == w.grid(), "weighted_norm: grid mismatch");
  for (double x : w.values())
    require(x >= 0.0, "weighted_norm: weight must be nonnegative");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    acc += w[j] * w[j] * std::norm(u[j]);
  return std::sqrt(acc * u.grid().spacing());
}

double weighted_norm(const RealField& u, const RealField& w) {
  require(u.grid() == w.grid(), "weighted_norm: grid mismatch");
  for (double x : w.values())
    require(x >= 0.0, "weighted_norm: weight must be nonnegative");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += w[j] * w[j] * u[j] * u[j];
  return std::sqrt(acc * u.grid().spacing());
}

RealField multiply(const RealField& a, const RealField& b) {
  require(a.grid() == b.grid(), "multiply: grid mismatch");
  RealField out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

Field multiply(const RealField& a, const Field& b) {
  require(a.grid() == b.grid(), "multiply: grid mismatch");
  Field out(b.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m) {
  require(all_finite(f), "apply_multiplier: non-finite input field");
  const auto& g = f.grid();
  auto& eng = engine_for(g.n);
  auto& buf = eng.buffer();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  eng.forward();
  for (std::size_t j = 0; j < g.n; ++j) buf[j] *= m(g.frequency(j));
  eng.backward();
  Field out(g);
  const double s = 1.0 / static_cast<double>(g.n);
  for (std::size_t j = 0; j < g.n; ++j) out[j] = buf[j] * s;
  return out;
}

RealField apply_multiplier_real(const RealField& f,
                                const std::function<cplx(double)>& m) {
  return real_part(apply_multiplier(to_complex(f), m));
}

Field spectral_derivative(const Field& f, int order) {
  require(order >= 1 && order <= 5, "spectral_derivative: order must be in [1,5]");
  require(all_finite(f), "spectral_derivative: non-finite input field");
  const auto& g = f.grid();
  auto& eng = engine_for(g.n);
  auto& buf = eng.buffer();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  eng.forward();
  const bool odd = (order % 2) != 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    if (odd && j == g.n / 2) {  // Nyquist mode has no consistent odd derivative
      buf[j] = 0.0;
      continue;
    }
    const cplx ix{0.0, g.frequency(j)};
    cplx p{1.0, 0.0};
    for (int k = 0; k < order; ++k) p *= ix;
    buf[j] *= p;
  }
  eng.backward();
  Field out(g);
  const double s = 1.0 / static_cast<double>(g.n);
  for (std::size_t j = 0; j < g.n; ++j) out[j] = buf[j] * s;
  return out;
}

RealField spectral_derivative(const RealField& f, int order) {
  return real_part(spectral_derivative(to_complex(f), order));
}

Field helmholtz_smooth(const Field& f, double alpha, double power) {
  require(alpha > 0.0 && std::isfinite(alpha), "helmholtz_smooth: alpha must be > 0");
  require(power == 0.5 || power == 1.0 || power == 2.0,
          "helmholtz_smooth: power must be one of {1/2, 1, 2}");
  return apply_multiplier(f, [alpha, power](double xi) -> cplx {
    return std::pow(1.0 + alpha * xi * xi, -power);
  });
}

RealField helmholtz_smooth(const RealField& f, double alpha, double power) {
  return real_part(helmholtz_smooth(to_complex(f), alpha, power));
}

RealField helmholtz_sharpen2(const RealField& f, double alpha) {
  require(alpha > 0.0, "helmholtz_sharpen2: alpha must be > 0");
  return apply_multiplier_real(f, [alpha](double xi) -> cplx {
    const double m = 1.0 + alpha * xi * xi;
    return m * m;
  });
}

RealField cumulative_integral(const RealField& f) {
  const auto& g = f.grid();
  double mean = 0.0;
  for (double x : f.values()) mean += x;
  mean /= static_cast<double>(g.n);

  RealField fluct(g);
  for (std::size_t j = 0; j < g.n; ++j) fluct[j] = f[j] - mean;
  RealField prim = apply_multiplier_real(fluct, [](double xi) -> cplx {
    if (xi == 0.0) return cplx{0.0, 0.0};
    return 1.0 / cplx{0.0, xi};
  });
  RealField out(g);
  const double x0 = g.node(0);
  for (std::size_t j = 0; j < g.n; ++j)
    out[j] = mean * (g.node(j) - x0) + (prim[j] - prim[0]);
  return out;
}

RealField solve_first_order(const RealField& f, double kappa, int direction) {
  require(kappa > 0.0, "solve_first_order: kappa must be > 0");
  require(direction == 1 || direction == -1,
          "solve_first_order: direction must be +-1");
  const double d = static_cast<double>(direction);
  return apply_multiplier_real(f, [kappa, d](double xi) -> cplx {
    return 1.0 / cplx{kappa, d * xi};
  });
}

namespace {

double top_octave_fraction_impl(const Field& f) {
  const auto& g = f.grid();
  auto& eng = engine_for(g.n);
  auto& buf = eng.buffer();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  eng.forward();
  const double xi_max = std::abs(g.frequency(g.n / 2));
  double top = 0.0, total = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double e = std::norm(buf[j]);
    total += e;
    if (std::abs(g.frequency(j)) >= 0.5 * xi_max) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

}  // namespace

double top_octave_fraction(const Field& f) { return top_octave_fraction_impl(f); }
double top_octave_fraction(const RealField& f) {
  return top_octave_fraction_impl(to_complex(f));
}

double spectral_norm_squared(const Field& f) {
  const auto& g = f.grid();
  auto& eng = engine_for(g.n);
  auto& buf = eng.buffer();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  eng.forward();
  double acc = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) acc += std::norm(buf[j]);
  // Parseval: sum_j |f_j|^2 = (1/n) sum_k |f_hat_k|^2; times spacing h.
  return acc * g.spacing() / static_cast<double>(g.n);
}

namespace diag {

namespace {
std::mutex& warn_mutex() {
  static std::mutex m;
  return m;
}
std::vector<std::string>& warn_log() {
  static std::vector<std::string> log;
  return log;
}
}  // namespace

void warn(std::string message) {
  std::lock_guard<std::mutex> lock(warn_mutex());
  warn_log().push_back(std::move(message));
}

std::vector<std::string> drain_warnings() {
  std::lock_guard<std::mutex> lock(warn_mutex());
  auto out = std::move(warn_log());
  warn_log().clear();
  return out;
}

}  // namespace diag

}  // namespace solwave
