#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cohui/types.hpp"

namespace cohui {

// Photon-number truncated spaces.
//
// One mode: basis |0>, ..., |n_max>.
// Two modes: all |k>_X |l>_Y with k + l <= n_max, ordered by total photon
// number N = k + l and then by k. Every total-photon sector kept is complete,
// so passive two-mode operators are represented without truncation error.

/// Number of two-mode basis states with total photon number <= n_max.
int two_mode_dim(int n_max);

/// Index of |k>_X |l>_Y in the two-mode basis.
int two_mode_index(int k, int l);

struct FockVector {
  int n_max = 0;
  int modes = 1;
  Eigen::VectorXcd coeffs;
  double tail_mass = 0.0;  // probability outside the truncated space

  double captured_norm_sq() const { return coeffs.squaredNorm(); }
};

struct FockOperator {
  int n_max = 0;
  int modes = 2;
  Eigen::MatrixXcd entries;
};

/// e^{-|alpha|^2/2} alpha^k / sqrt(k!) for k <= n_max; not renormalized.
FockVector coherent_fock(ComplexAmplitude alpha, int n_max);

/// |alpha>_X |beta>_Y restricted to total photon number <= n_max.
FockVector coherent_pair_fock(ComplexAmplitude alpha, ComplexAmplitude beta, int n_max);

/// chi_N = 2^{-N/2} sum_k sqrt(C(N,k)) |k>|N-k>.
FockVector chi_vector(int n, int n_max);

/// (pi/2) sum_{N <= n_max} |chi_N><chi_N|.
FockOperator delta_operator(int n_max);

/// Two-mode beamsplitter unitary with the same sign convention as the
/// coherent-amplitude map, assembled sector by sector from
///   U a^dag U^dag = sqrt(T) a^dag - sqrt(R) b^dag,
///   U b^dag U^dag = sqrt(R) a^dag + sqrt(T) b^dag.
FockOperator beamsplitter_fock(double transmittivity, int n_max);

/// Optimal comparator: Pi0 = sum |chi_N><chi_N|, Pi1 = 1 - Pi0.
std::pair<FockOperator, FockOperator> comparator_povm_opt(int n_max);

/// 1_X (x) |0><0|_Y on the two-mode truncated space.
FockOperator vacuum_projector_y(int n_max);

struct BsVsOptReport {
  int n_max = 0;
  double transmittivity = 0.5;
  int sectors_compared = 0;
  double deviation = 0.0;  // max |Pi0_bs - Pi0_opt|
  std::string note;
};

/// Pi0_bs = U^dag (1 (x) |0><0|) U compared entrywise with Pi0_opt.
BsVsOptReport verify_bs_equals_opt(int n_max, double transmittivity = 0.5);

/// Max entry between different total-photon sectors.
double off_sector_magnitude(const FockOperator& op);

/// Smallest cutoff giving a negligible tail for amplitude modulus r:
/// n_max >= r^2 + 8 r + 20.
int safe_cutoff(double modulus);

}  // namespace cohui
