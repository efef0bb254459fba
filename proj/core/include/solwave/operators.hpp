#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solwave/grid.hpp"
#include "solwave/soliton.hpp"

namespace solwave {

enum class OperatorName {
  Lplus,
  Lminus,
  Mplus,
  Mminus,
  S,
  Sstar,
  MminusS2,
  S2Lplus,
  Qplus,
  Qminus,
  Yalpha,
};

std::string to_string(OperatorName name);
OperatorName parse_operator_name(const std::string& s);

/// Coefficient fields for all operators at a fixed (omega, grid). Immutable
/// after construction; applications are pure and safe to share across threads.
///
/// The first-order factors use the closed-form ratio R = phi'/phi (never a
/// quotient of sampled fields), and the omega-derivative operators use
/// T = Lambda/phi and T' for the same reason.
class OperatorAssembly {
 public:
  OperatorAssembly(double omega, const Grid& grid);

  double omega() const { return omega_; }
  const Grid& grid() const { return grid_; }
  const SolitonShape& shape() const { return shape_; }

  const RealField& phi() const { return phi_; }
  const RealField& dphi() const { return dphi_; }
  const RealField& lambda() const { return lambda_; }
  const RealField& R() const { return R_; }

  RealField apply(OperatorName name, const RealField& g,
                  std::optional<double> alpha = std::nullopt) const;
  Field apply(OperatorName name, const Field& g,
              std::optional<double> alpha = std::nullopt) const;

  /// Y_alpha via the 2-alpha/alpha^2 re-expansion; c4 is the coefficient on
  /// the (phi^4)'''' g term (+1 is the algebraically consistent value).
  RealField yalpha_rewrite(const RealField& g, double alpha,
                           double c4 = 1.0) const;

 private:
  RealField composed_fourth_order(const RealField& g, bool m_minus_route) const;

  double omega_;
  Grid grid_;
  SolitonShape shape_;

  RealField phi_, dphi_, lambda_;
  RealField phi2_, phi4_, phi6_, phi8_;
  RealField R_, T_, Tp_;
  RealField phidphi_, phi3dphi_;
  // closed-form derivatives of W = phi^4 up to 4th order
  RealField W1_, W2_, W3_, W4_;
};

struct ProbeResidualRow {
  std::string probe;
  double conjugate;   // S^2 L+ L- g - M+ M- S^2 g
  double slps;        // S L+ S* g - S* M- S g
  double lminus;      // L- g - S* S g
  double mplus;       // M+ g - S S* g
  double scale;       // max sup-norm of the compared sides
};

struct IdentityReport {
  std::vector<ProbeResidualRow> rows;   // relative residuals (abs/scale)
  double r_squared;                     // sup |R^2 - (w - phi^2/2 + phi^4/3)|
  double r_prime;                       // sup |R' - (-phi^2/2 + 2phi^4/3)|
  double r_second;                      // sup |R'' - R(-phi^2 + 8phi^4/3)|
  double eq_id;                         // sup |(phi')^2 - (w phi^2 - phi^4/2 + phi^6/3)|
  double expanded_vs_composed_mminus;   // rel. residual of the expanded M-S^2
  double expanded_vs_composed_s2lplus;  // rel. residual of the expanded S^2L+
  double max_relative() const;
};

IdentityReport identity_residuals(double omega, const Grid& grid,
                                  std::span<const RealField> probes);

struct QConsistencyReport {
  // one entry per operator pair: {M-S^2 vs Q-, S^2L+ vs Q+}
  struct Entry {
    std::string pair;
    double disc_delta;        // relative discrepancy at delta
    double disc_half_delta;   // at delta/2
    double ratio;             // disc_delta / disc_half_delta (~4 expected)
    double richardson;        // rel. discrepancy of the delta->0 extrapolation
  };
  Entry mminus_route;
  Entry s2lplus_route;
};

QConsistencyReport q_consistency(double omega, double delta,
                                 const RealField& probe);

/// The fixed 8-probe corpus (3 Gaussians, 2 modulated Gaussians, 2 soliton
/// bumps, 1 odd Gaussian moment).
std::vector<RealField> probe_corpus(const Grid& grid, double omega);
std::vector<std::string> probe_corpus_names();

}  // namespace solwave
