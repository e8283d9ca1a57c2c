#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohui/types.hpp"

namespace cohui {

// Identification probabilities for coherent references as functions of
// delta_abs = |alpha1 - alpha2|. All curves vanish at 0 and are nondecreasing.

/// Swap-based (universal), equal priors: (1 - exp(-d^2)) / 4.
double p_sb(double delta_abs);

/// Optimal universal, equal priors: (1 - exp(-d^2)) / 3.
double p_opt(double delta_abs);

/// Swap-like coherent measurement at c1 = c2 = 1/2: (1 - exp(-d^2/2)) / 2.
double p_sbf(double delta_abs);

/// Known-state unambiguous discrimination reference line: 1 - exp(-d^2/2).
double p_idp_known(double delta_abs);

/// Three-beamsplitter setup:
///   eta1 (1 - exp(-(1-T1)/(2-T1) |D|^2)) + eta2 (1 - exp(-T1/(1+T1) |D|^2)).
/// Requires 0 < t1 < 1.
double p_bs(ComplexAmplitude alpha1, ComplexAmplitude alpha2, double t1, Priors priors);

/// p_bs at the equal-prior optimum T1 = 1/2.
double p_bs_equal(double delta_abs);

/// Residual of the equal-prior critical-point condition
///   (1+T)^2/(2-T)^2 exp(-|D|^2 ((1-T)/(2-T) - T/(1+T))) - 1.
double critical_point_residual(double t1, double delta_abs);

/// Maximizes p_bs over T1 in (0,1) by grid bracketing then golden-section.
/// Result is within 1e-6 of the maximizer. Throws DegenerateError if alpha1 == alpha2.
double optimize_t1(ComplexAmplitude alpha1, ComplexAmplitude alpha2, Priors priors);

struct OrderingReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  /// Largest lhs - rhs over all relations and points; <= 0 when the ordering holds.
  double max_violation = 0.0;
  double sb_le_sbf = 0.0;
  double sbf_le_bs = 0.0;
  double opt_le_bs = 0.0;
  double bs_le_idp = 0.0;

  bool ok() const { return violations == 0; }
};

/// Checks P_sb <= P_sbf <= P_bs <= P_idp and P_opt <= P_bs at every grid point.
OrderingReport verify_ordering(std::span<const double> grid);

enum class UniversalStrategy { kSwapBased, kOptimal };

/// Haar-averaged identification probability in dimension d:
/// (d-1)/(4d) for swap-based, (d-1)/(3d) for optimal.
double mean_p_universal(int d, UniversalStrategy strategy);

struct CurvePoint {
  double delta_abs;
  std::string strategy;
  double probability;
};

/// Strategy labels in emission order: sb, opt, sbf, bs, idp.
const std::vector<std::string>& curve_strategies();

double curve_value(std::string_view strategy, double delta_abs);

/// Evenly spaced grid of `steps` points from lo to hi inclusive (steps >= 2).
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

/// One block per strategy, each covering the full grid.
std::vector<CurvePoint> curve_table(std::span<const double> grid);

}  // namespace cohui
