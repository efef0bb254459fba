#include "solwave/spectral.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace solwave {

namespace {

double potential(OperatorName name, const SolitonShape& s, double x) {
  const double p = s.phi(x);
  const double p2 = p * p, p4 = p2 * p2;
  switch (name) {
    case OperatorName::Lplus: return s.omega() - 3.0 * p2 + 5.0 * p4;
    case OperatorName::Lminus: return s.omega() - p2 + p4;
    case OperatorName::Mplus: return s.omega() - p4 / 3.0;
    case OperatorName::Mminus: return s.omega() + p4;
    default:
      throw std::invalid_argument(
          "spectrum: operator must be one of Lplus, Lminus, Mplus, Mminus");
  }
}

/// Dense symmetric matrix of -d_xx + V on interior Dirichlet nodes of [-W, W].
Eigen::MatrixXd assemble_matrix(OperatorName name, double omega,
                                double half_width, std::size_t n,
                                Discretization disc) {
  SolitonShape s(omega);
  const double h = 2.0 * half_width / static_cast<double>(n + 1);
  Eigen::MatrixXd A;
  if (disc == Discretization::FiniteDifference2) {
    A = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      A(i, i) = 2.0 / (h * h);
      if (i + 1 < n) {
        A(i, i + 1) = -1.0 / (h * h);
        A(i + 1, i) = -1.0 / (h * h);
      }
    }
  } else {
    // sine collocation: K = S diag(xi_m^2) S with S the orthonormal DST-I
    // basis, built column-by-column through FFTW's RODFT00
    static std::mutex planner_mutex;
    std::vector<double> buf(n);
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex);
      plan = fftw_plan_r2r_1d(static_cast<int>(n), buf.data(), buf.data(),
                              FFTW_RODFT00, FFTW_ESTIMATE);
    }
    std::vector<double> lam(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double xi = static_cast<double>(m + 1) * std::numbers::pi /
                        (2.0 * half_width);
      lam[m] = xi * xi;
    }
    A.resize(n, n);
    const double scale = 1.0 / (2.0 * static_cast<double>(n + 1));
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(buf.begin(), buf.end(), 0.0);
      buf[j] = 1.0;
      fftw_execute(plan);
      for (std::size_t m = 0; m < n; ++m) buf[m] *= lam[m];
      fftw_execute(plan);
      for (std::size_t i = 0; i < n; ++i) A(i, j) = scale * buf[i];
    }
    {
      std::lock_guard<std::mutex> lock(planner_mutex);
      fftw_destroy_plan(plan);
    }
    A = 0.5 * (A + A.transpose()).eval();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -half_width + static_cast<double>(i + 1) * h;
    A(i, i) += potential(name, s, x);
  }
  return A;
}

std::vector<double> interior_nodes(double half_width, std::size_t n) {
  const double h = 2.0 * half_width / static_cast<double>(n + 1);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = -half_width + static_cast<double>(i + 1) * h;
  return xs;
}

}  // namespace

SpectrumReport spectrum(OperatorName name, double omega, int k,
                        double half_width, std::size_t n, Discretization disc) {
  validate_omega(omega);
  if (k < 1) throw std::invalid_argument("spectrum: k must be >= 1");
  if (n > 4096) throw std::invalid_argument("spectrum: matrix size capped at 4096");
  SolitonShape s(omega);
  if (s.phi(half_width) > 1e-10)
    diag::warn("spectrum: soliton tail above 1e-10 at the Dirichlet boundary");

  const Eigen::MatrixXd A = assemble_matrix(name, omega, half_width, n, disc);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver failed to converge");

  SpectrumReport report;
  report.op = name;
  report.omega = omega;
  report.half_width = half_width;
  report.nodes = interior_nodes(half_width, n);

  const auto& evals = solver.eigenvalues();
  const double op_scale =
      std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1)));
  report.zero_tolerance = 1e-8 * op_scale;
  report.negative_count = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (evals(i) < -report.zero_tolerance) ++report.negative_count;

  const int kk = std::min<int>(k, static_cast<int>(n));
  for (int i = 0; i < kk; ++i) {
    report.eigenvalues.push_back(evals(i));
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = solver.eigenvectors()(j, i);
    report.eigenvectors.push_back(std::move(v));
  }

  // alignment of the eigenvector nearest zero with the known kernel direction
  const bool has_kernel =
      (name == OperatorName::Lminus || name == OperatorName::Lplus);
  if (has_kernel && !report.eigenvalues.empty()) {
    int best = 0;
    for (int i = 1; i < kk; ++i)
      if (std::abs(report.eigenvalues[i]) < std::abs(report.eigenvalues[best]))
        best = i;
    double dot = 0.0, nv = 0.0, nk = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = report.nodes[j];
      const double kdir = (name == OperatorName::Lminus) ? s.phi(x) : s.dphi(x);
      dot += report.eigenvectors[best][j] * kdir;
      nv += report.eigenvectors[best][j] * report.eigenvectors[best][j];
      nk += kdir * kdir;
    }
    report.kernel_alignment = std::abs(dot) / std::sqrt(nv * nk);
  }
  return report;
}

std::vector<double> periodic_spectrum(OperatorName name, double omega,
                                      double half_width, std::size_t n, int k) {
  const Grid g = make_grid(n, 2.0 * half_width);
  OperatorAssembly op(omega, g);
  Eigen::MatrixXd A(n, n);
  RealField e(g);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.values().begin(), e.values().end(), 0.0);
    e[j] = 1.0;
    const RealField col = op.apply(name, e);
    for (std::size_t i = 0; i < n; ++i) A(i, j) = col[i];
  }
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("periodic_spectrum: eigensolver failed");
  std::vector<double> out;
  for (int i = 0; i < k && i < static_cast<int>(n); ++i)
    out.push_back(solver.eigenvalues()(i));
  return out;
}

namespace {

/// Eigenvalues of the symmetrized product L-^(1/2) L+ L-^(1/2).
std::vector<double> product_eigenvalues(double omega, double half_width,
                                        std::size_t n) {
  const Eigen::MatrixXd Ap = assemble_matrix(
      OperatorName::Lplus, omega, half_width, n, Discretization::SineSpectral);
  const Eigen::MatrixXd Am = assemble_matrix(
      OperatorName::Lminus, omega, half_width, n, Discretization::SineSpectral);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sm(Am);
  if (sm.info() != Eigen::Success)
    throw std::runtime_error("internal_mode_scan: L- eigensolve failed");
  Eigen::VectorXd sq = sm.eigenvalues();
  for (Eigen::Index i = 0; i < sq.size(); ++i)
    sq(i) = std::sqrt(std::max(sq(i), 0.0));
  const Eigen::MatrixXd half =
      sm.eigenvectors() * sq.asDiagonal() * sm.eigenvectors().transpose();
  Eigen::MatrixXd T = half * Ap * half;
  T = 0.5 * (T + T.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> st(T);
  if (st.info() != Eigen::Success)
    throw std::runtime_error("internal_mode_scan: product eigensolve failed");
  std::vector<double> evals(st.eigenvalues().data(),
                            st.eigenvalues().data() + st.eigenvalues().size());
  return evals;
}

std::vector<double> gap_entries(const std::vector<double>& evals, double lo,
                                double hi) {
  std::vector<double> out;
  for (double v : evals)
    if (v > lo && v < hi) out.push_back(v);
  return out;
}

}  // namespace

InternalModeReport internal_mode_scan(double omega, double half_width,
                                      std::size_t n_base) {
  if (!(omega > 0.0 && omega <= 0.125))
    throw std::invalid_argument("internal_mode_scan: omega must lie in (0, 1/8]");
  if (half_width <= 0.0) half_width = 60.0 / std::sqrt(omega);

  InternalModeReport report;
  report.omega = omega;
  report.gap_edge = omega * omega;
  const double kernel_tol = 1e-6 * report.gap_edge;
  const double edge = report.gap_edge * (1.0 - 1e-9);

  const auto base = product_eigenvalues(omega, half_width, n_base);
  const auto dom2 = product_eigenvalues(omega, 2.0 * half_width, 2 * n_base);

  // two generalized-kernel directions
  for (double v : base) {
    if (std::abs(v) <= kernel_tol) report.kernel_eigenvalues.push_back(v);
    if (report.kernel_eigenvalues.size() == 2) break;
  }

  // kernel residuals of the unsymmetrized product applied to phi and x*phi
  {
    const std::size_t n = n_base;
    const Eigen::MatrixXd Ap =
        assemble_matrix(OperatorName::Lplus, omega, half_width, n,
                        Discretization::SineSpectral);
    const Eigen::MatrixXd Am =
        assemble_matrix(OperatorName::Lminus, omega, half_width, n,
                        Discretization::SineSpectral);
    SolitonShape s(omega);
    const auto xs = interior_nodes(half_width, n);
    Eigen::VectorXd phi(n), xphi(n);
    for (std::size_t i = 0; i < n; ++i) {
      phi(i) = s.phi(xs[i]);
      xphi(i) = xs[i] * s.phi(xs[i]);
    }
    const double scale =
        std::max(Ap.cwiseAbs().maxCoeff(), Am.cwiseAbs().maxCoeff());
    report.kernel_residual_phi =
        (Ap * (Am * phi)).norm() / (scale * scale * phi.norm());
    report.kernel_residual_xphi =
        (Ap * (Am * xphi)).norm() / (scale * scale * xphi.norm());
  }

  const auto cand_base = gap_entries(base, kernel_tol, edge);
  const auto cand_dom2 = gap_entries(dom2, kernel_tol, edge);

  if (!cand_base.empty() || !cand_dom2.empty()) {
    const auto refined =
        product_eigenvalues(omega, 2.0 * half_width, 4 * n_base);
    const auto cand_ref = gap_entries(refined, kernel_tol, edge);
    for (double v : cand_base) {
      InternalModeReport::GapMode m{};
      m.lambda2_base = v;
      const auto nearest = [](const std::vector<double>& xs, double t) {
        double best = std::numeric_limits<double>::quiet_NaN();
        double d = std::numeric_limits<double>::infinity();
        for (double x : xs)
          if (std::abs(x - t) < d) {
            d = std::abs(x - t);
            best = x;
          }
        return best;
      };
      m.lambda2_domain2 = nearest(cand_dom2, v);
      m.lambda2_refined = nearest(cand_ref, v);
      if (std::isnan(m.lambda2_refined)) {
        m.move_fraction = 1.0;
        m.persistent = false;
        m.drift_to_edge = 1.0;
      } else {
        m.move_fraction = std::abs(m.lambda2_refined - m.lambda2_base) / v;
        m.persistent = m.move_fraction < 0.05;
        const double gap0 = report.gap_edge - v;
        const double gap1 = std::isnan(m.lambda2_domain2)
                                ? 0.0
                                : report.gap_edge - m.lambda2_domain2;
        m.drift_to_edge = gap0 > 0.0 ? (gap0 - gap1) / gap0 : 0.0;
      }
      if (m.persistent) ++report.persistent_count;
      report.gap_modes.push_back(m);
    }
  }

  // continuum-edge heuristic (resonance indicator is qualitative only)
  const auto first_above = [&](const std::vector<double>& evals) {
    for (double v : evals)
      if (v >= edge) return v;
    return std::numeric_limits<double>::quiet_NaN();
  };
  report.edge_mode_base = first_above(base);
  report.edge_mode_domain2 = first_above(dom2);
  return report;
}

namespace {

/// Classical RK4 for y'' = c1 * y' + c0(x) * y with closed-form c0; walks the
/// grid nodes from `from` to `to` (inclusive), m substeps per cell, recording
/// (y, y') at every node.
template <typename C0>
void integrate_second_order(const Grid& g, std::ptrdiff_t from,
                            std::ptrdiff_t to, double y0, double p0, double c1,
                            C0&& c0, std::vector<double>& y_out,
                            std::vector<double>& p_out, int substeps = 8) {
  const std::ptrdiff_t dir = (to >= from) ? 1 : -1;
  const double h = g.spacing() * static_cast<double>(dir) / substeps;
  double x = g.node(from), y = y0, p = p0;
  y_out[from] = y;
  p_out[from] = p;
  for (std::ptrdiff_t j = from; j != to; j += dir) {
    for (int s = 0; s < substeps; ++s) {
      const auto f = [&](double xx, double yy, double pp) {
        return std::pair<double, double>{pp, c1 * pp + c0(xx) * yy};
      };
      const auto [k1y, k1p] = f(x, y, p);
      const auto [k2y, k2p] = f(x + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p);
      const auto [k3y, k3p] = f(x + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p);
      const auto [k4y, k4p] = f(x + h, y + h * k3y, p + h * k3p);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      x += h;
    }
    y_out[j + dir] = y;
    p_out[j + dir] = p;
  }
}

/// Spectral primitive F(x) = int_{-L/2}^x f with exponential-tail
/// regularization: nonzero endpoint values are absorbed into a tanh template
/// whose primitive is known in closed form.
RealField primitive_with_tails(const RealField& f, double kappa) {
  const Grid& g = f.grid();
  const double cl = f[0], cr = f[g.n - 1];
  const double mean = 0.5 * (cl + cr), slope = 0.5 * (cr - cl);
  RealField dec = f;
  for (std::size_t j = 0; j < g.n; ++j)
    dec[j] -= mean + slope * std::tanh(kappa * g.node(j));
  RealField out = cumulative_integral(dec);
  const double x0 = g.node(0);
  const auto logcosh = [kappa](double x) {
    // log(cosh(kx)) without overflow
    const double a = std::abs(kappa * x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
  };
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    out[j] += mean * (x - x0) + slope / kappa * (logcosh(x) - logcosh(x0));
  }
  return out;
}

void check_source_decay(const RealField& W, const char* who) {
  const double s = sup_norm(W);
  double edge = 0.0;
  for (std::size_t j = 0; j < 5; ++j)
    edge = std::max({edge, std::abs(W[j]), std::abs(W[W.size() - 1 - j])});
  if (s > 0.0 && edge > 1e-8 * s)
    diag::warn(std::string(who) +
               ": source does not decay at the box edge; quadrature tails are "
               "unreliable");
}

}  // namespace

HomogeneousSolutions build_homogeneous(double omega, const Grid& grid) {
  validate_omega(omega);
  SolitonShape s(omega);
  const double kappa = std::sqrt(omega);
  const std::size_t n = grid.n;
  const std::size_t c = grid.center_index();

  HomogeneousSolutions out;
  out.omega = omega;
  out.grid = grid;

  // G: even solution of L+ G = 0, seeded at the center by the Wronskian
  // normalization phi''(0) G(0) = 1, integrated outward (its growing
  // direction, so the march is stable)
  std::vector<double> Gv(n, 0.0), Gp(n, 0.0);
  const double G0 = 1.0 / s.d2phi(0.0);
  const auto VL = [&](double x) {
    const double p = s.phi(x), p2 = p * p;
    return omega - 3.0 * p2 + 5.0 * p2 * p2;
  };
  integrate_second_order(grid, c, n - 1, G0, 0.0, 0.0, VL, Gv, Gp);
  integrate_second_order(grid, c, 0, G0, 0.0, 0.0, VL, Gv, Gp);

  out.G = RealField(grid, Gv);
  out.G_weighted = RealField(grid);
  for (std::size_t j = 0; j < n; ++j)
    out.G_weighted[j] = Gv[j] * std::exp(-kappa * std::abs(grid.node(j)));

  double wg_sup = 0.0, wg_mean = 0.0, wg_m2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.node(j);
    const double r = s.d2phi(x) * Gv[j] - s.dphi(x) * Gp[j] - 1.0;
    wg_sup = std::max(wg_sup, std::abs(r));
    wg_mean += r;
    wg_m2 += r * r;
  }
  wg_mean /= static_cast<double>(n);
  out.wronskian_G_sup = wg_sup;
  out.wronskian_G_std =
      std::sqrt(std::max(0.0, wg_m2 / static_cast<double>(n) - wg_mean * wg_mean));

  double even_defect = 0.0, core_sup = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.node(j);
    if (std::abs(x) > 10.0 / kappa) continue;
    core_sup = std::max(core_sup, std::abs(Gv[j]));
    const std::size_t jr = 2 * c - j;  // node at -x (exact on this grid)
    if (jr < n) even_defect = std::max(even_defect, std::abs(Gv[j] - Gv[jr]));
  }
  out.g_even_defect = core_sup > 0.0 ? even_defect / core_sup : 0.0;

  // weighted forms of H1, H2 (exact exponential factored out; the marches run
  // toward each solution's growing side, so both are stable)
  const auto P4 = [&](double x) {
    const double p2 = s.phi(x) * s.phi(x);
    return p2 * p2;
  };
  std::vector<double> h1(n, 0.0), dh1(n, 0.0), h2(n, 0.0), dh2(n, 0.0);
  integrate_second_order(grid, n - 1, 0, 1.0, 0.0, 2.0 * kappa, P4, h1, dh1);
  integrate_second_order(grid, 0, n - 1, 1.0, 0.0, -2.0 * kappa, P4, h2, dh2);

  // Wronskian in weighted variables: H1 H2' - H1' H2 = h1 h2' - h1' h2 + 2k h1 h2
  std::vector<double> w0(n);
  for (std::size_t j = 0; j < n; ++j)
    w0[j] = h1[j] * dh2[j] - dh1[j] * h2[j] + 2.0 * kappa * h1[j] * h2[j];
  const double wc = w0[c];
  if (!(wc > 0.0))
    throw std::runtime_error("build_homogeneous: H Wronskian not positive");
  const double scale = 1.0 / std::sqrt(wc);
  for (std::size_t j = 0; j < n; ++j) {
    h1[j] *= scale; dh1[j] *= scale;
    h2[j] *= scale; dh2[j] *= scale;
  }
  double wh_sup = 0.0, wh_mean = 0.0, wh_m2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = w0[j] * scale * scale - 1.0;
    wh_sup = std::max(wh_sup, std::abs(r));
    wh_mean += r;
    wh_m2 += r * r;
  }
  wh_mean /= static_cast<double>(n);
  out.wronskian_H_sup = wh_sup;
  out.wronskian_H_std =
      std::sqrt(std::max(0.0, wh_m2 / static_cast<double>(n) - wh_mean * wh_mean));

  out.h1 = RealField(grid, h1);
  out.h2 = RealField(grid, h2);
  out.dh1 = RealField(grid, dh1);
  out.dh2 = RealField(grid, dh2);
  out.H1 = RealField(grid);
  out.H2 = RealField(grid);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.node(j);
    out.H1[j] = h1[j] * std::exp(-kappa * x);
    out.H2[j] = h2[j] * std::exp(kappa * x);
  }

  // right-tail decay rate of H1 (log-slope between 0.5 W and 0.85 W)
  {
    const double W = 0.5 * grid.length;
    const std::size_t j1 = c + static_cast<std::size_t>(0.5 * W / grid.spacing());
    const std::size_t j2 = c + static_cast<std::size_t>(0.85 * W / grid.spacing());
    out.h1_log_slope = (std::log(std::abs(out.H1[j2])) -
                        std::log(std::abs(out.H1[j1]))) /
                       (grid.node(j2) - grid.node(j1));
  }
  return out;
}

RealField invert_Lplus(const RealField& W, double omega,
                       const HomogeneousSolutions* homog) {
  validate_omega(omega);
  check_source_decay(W, "invert_Lplus");
  const Grid& g = W.grid();
  SolitonShape s(omega);
  const RealField dphi =
      make_real_field(g, [&](double x) { return s.dphi(x); });
  const double proj = inner(W, dphi);
  if (std::abs(proj) > 1e-8 * norm(W) * norm(dphi))
    throw std::invalid_argument(
        "invert_Lplus: <W, phi'> must vanish (branch matching), got " +
        std::to_string(proj));

  HomogeneousSolutions local;
  if (!homog) {
    local = build_homogeneous(omega, g);
    homog = &local;
  }
  const double kappa = std::sqrt(omega);

  // C1(x) = int_0^x G W
  RealField C1 = primitive_with_tails(multiply(homog->G, W), kappa);
  const double C1c = C1[g.center_index()];
  for (auto& v : C1.values()) v -= C1c;

  // weighted phi' kernels: p+- = e^{+-kappa x} phi'(x)
  RealField pW_plus(g), pW_minus(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    pW_plus[j] = std::exp(kappa * x) * s.dphi(x) * W[j];
    pW_minus[j] = std::exp(-kappa * x) * s.dphi(x) * W[j];
  }
  // Qp(x) = e^{kappa x} int_x^inf phi' W ; Pm(x) = e^{-kappa x} int_-inf^x phi' W
  const RealField Qp = solve_first_order(pW_plus, kappa, -1);
  const RealField Pm = solve_first_order(pW_minus, kappa, +1);

  RealField U(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    const double t1 = -s.dphi(x) * C1[j];
    if (x >= 0.0)
      U[j] = t1 - homog->G_weighted[j] * Qp[j];
    else
      U[j] = t1 + homog->G_weighted[j] * Pm[j];
  }
  return U;
}

RealField invert_Mminus(const RealField& W, double omega,
                        const HomogeneousSolutions* homog) {
  validate_omega(omega);
  check_source_decay(W, "invert_Mminus");
  const Grid& g = W.grid();
  HomogeneousSolutions local;
  if (!homog) {
    local = build_homogeneous(omega, g);
    homog = &local;
  }
  const double kappa = std::sqrt(omega);
  // J-[W] = h1 * (d/dx + k)^{-1}[h2 W] + h2 * (-d/dx + k)^{-1}[h1 W]
  const RealField P = solve_first_order(multiply(homog->h2, W), kappa, +1);
  const RealField Q = solve_first_order(multiply(homog->h1, W), kappa, -1);
  RealField U(g);
  for (std::size_t j = 0; j < g.n; ++j)
    U[j] = homog->h1[j] * P[j] + homog->h2[j] * Q[j];
  return U;
}

}  // namespace solwave
