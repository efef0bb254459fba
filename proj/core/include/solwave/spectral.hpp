#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "solwave/grid.hpp"
#include "solwave/operators.hpp"

namespace solwave {

enum class Discretization { SineSpectral, FiniteDifference2 };

/// Eigen-analysis of a Schroedinger operator on [-W, W] with Dirichlet
/// truncation (interior collocation nodes).
struct SpectrumReport {
  OperatorName op;
  double omega = 0.0;
  double half_width = 0.0;
  std::vector<double> nodes;                      // interior nodes
  std::vector<double> eigenvalues;                // lowest k, ascending
  std::vector<std::vector<double>> eigenvectors;  // matching eigenvalues
  int negative_count = 0;
  double kernel_alignment = 0.0;  // |cos| angle to the known kernel direction
  double zero_tolerance = 0.0;    // negative-count threshold (scaled)
};

SpectrumReport spectrum(OperatorName name, double omega, int k,
                        double half_width, std::size_t n = 1024,
                        Discretization disc = Discretization::SineSpectral);

/// Lowest k eigenvalues of the same operator under periodic truncation on a
/// box of size 2*half_width (for the Dirichlet-vs-periodic cross-check).
std::vector<double> periodic_spectrum(OperatorName name, double omega,
                                      double half_width, std::size_t n, int k);

/// Scan of the linearized-problem point spectrum in the gap (0, omega^2),
/// via the symmetric form L-^(1/2) L+ L-^(1/2) of the product eigenproblem.
struct InternalModeReport {
  struct GapMode {
    double lambda2_base;
    double lambda2_domain2;   // domain doubled, spacing kept
    double lambda2_refined;   // domain and resolution doubled
    double move_fraction;     // |refined - base| / base
    bool persistent;          // < 5% movement
    double drift_to_edge;     // fractional drift toward omega^2 under domain doubling
  };
  double omega = 0.0;
  double gap_edge = 0.0;  // omega^2
  std::vector<double> kernel_eigenvalues;  // the two near-zero values
  double kernel_residual_phi = 0.0;        // |L+ L- phi| relative
  double kernel_residual_xphi = 0.0;       // |L+ L- (x phi)| relative
  std::vector<GapMode> gap_modes;
  std::size_t persistent_count = 0;
  // heuristic threshold-resonance indicator: smallest above-gap eigenvalue
  // and its relative approach to the continuum edge under domain doubling
  double edge_mode_base = 0.0;
  double edge_mode_domain2 = 0.0;
};

InternalModeReport internal_mode_scan(double omega, double half_width = 0.0,
                                      std::size_t n_base = 640);

/// Homogeneous solutions of L+ G = 0 (even, Wronskian phi'' G - phi' G' = 1)
/// and M- H = 0 (H1 decays right, H2 decays left, H1 H2' - H1' H2 = 1).
/// Exponentially weighted companions are kept so downstream quadratures never
/// multiply huge by tiny:
///   g_weighted = G e^{-sqrt(w)|x|},  h1 = H1 e^{+sqrt(w)x},  h2 = H2 e^{-sqrt(w)x}.
struct HomogeneousSolutions {
  double omega = 0.0;
  Grid grid;
  RealField G, G_weighted;
  RealField H1, H2;          // raw values (may be astronomically large)
  RealField h1, h2;          // O(1) weighted forms
  RealField dh1, dh2;        // derivatives of the weighted forms
  double wronskian_G_sup = 0.0;  // sup |phi'' G - phi' G' - 1|
  double wronskian_G_std = 0.0;
  double wronskian_H_sup = 0.0;  // sup |H1 H2' - H1' H2 - 1|
  double wronskian_H_std = 0.0;
  double h1_log_slope = 0.0;     // fitted right-tail slope of log|H1|
  double g_even_defect = 0.0;    // sup |G(x) - G(-x)|/sup|G| over the core
};

HomogeneousSolutions build_homogeneous(double omega, const Grid& grid);

/// I+ [W]: solves L+ U = W via the two-branch G/phi' quadrature. Requires
/// <W, phi'> = 0 (rejected otherwise).
RealField invert_Lplus(const RealField& W, double omega,
                       const HomogeneousSolutions* homog = nullptr);

/// J- [W]: solves M- U = W via the H1/H2 quadrature.
RealField invert_Mminus(const RealField& W, double omega,
                        const HomogeneousSolutions* homog = nullptr);

}  // namespace solwave
