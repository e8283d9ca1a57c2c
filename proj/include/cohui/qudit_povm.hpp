#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohui/types.hpp"

namespace cohui {

// Three-qudit operators act on A (x) B (x) C with A the unknown system.
// Basis index of |a b c> is (a*d + b)*d + c.

using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Pair of subsystems a pair operator acts on.
enum class Pair { kAB, kAC, kBC };

struct DensePOVM {
  int local_dim = 0;                  // d of each subsystem
  std::vector<DenseOperator> elements;  // E0 (inconclusive) first
  std::vector<std::string> labels;

  std::size_t size() const { return elements.size(); }
  const DenseOperator& e0() const { return elements.at(0); }
  const DenseOperator& e1() const { return elements.at(1); }
  const DenseOperator& e2() const { return elements.at(2); }
};

/// SWAP on C^d (x) C^d.
DenseOperator swap_operator(int d);

/// (1 - SWAP)/2, the projector onto the antisymmetric subspace of two qudits.
DenseOperator antisym_projector_pair(int d);

/// Embeds a two-qudit operator on `pair` into A(x)B(x)C, identity on the third system.
/// Built by explicit index permutation.
DenseOperator embed_pair(const DenseOperator& pair_op, Pair pair, int d);

/// Permutation operator P|x_0 x_1 x_2> = |x_{perm^{-1}(0)} x_{perm^{-1}(1)} x_{perm^{-1}(2)}>,
/// i.e. the content of slot i moves to slot perm[i].
DenseOperator permutation_operator(int d, const std::array<int, 3>& perm);

/// Totally symmetric / antisymmetric projectors on three qudits (average over S3).
DenseOperator symmetrizer3(int d);
DenseOperator antisymmetrizer3(int d);

/// E1 = c1 1_B(x)A_AC, E2 = c2 1_C(x)A_AB, E0 = 1 - E1 - E2. Positivity is not checked.
DensePOVM build_sb_povm(int d, double c1, double c2);

struct BlockEigenvalues {
  double c1 = 0.0, c2 = 0.0;
  std::array<double, 3> lambda3{};  // descending
  std::array<double, 6> lambda6{};  // descending
};

/// Closed-form eigenvalues of the 3x3 and 6x6 blocks of the swap-based E0.
BlockEigenvalues e0_block_eigenvalues(double c1, double c2);

/// The 3x3 block over basis (iij, iji, jii) and the 6x6 block over
/// (ijk, kji, jki, ikj, kij, jik), assembled entry by entry.
Eigen::Matrix3d assemble_q3(double c1, double c2);
Eigen::Matrix<double, 6, 6> assemble_q6(double c1, double c2);

struct CertificationReport {
  std::vector<double> min_eigenvalues;     // per element
  std::vector<double> hermiticity_errors;  // max |M - M^dagger| per element
  double completeness_error = 0.0;         // max |sum E - 1|
  double tolerance = 0.0;
  bool pass = false;

  double min_eigenvalue() const;
};

inline constexpr double kPositivityTol = 1e-10;

CertificationReport certify_povm(const DensePOVM& povm, double tol = kPositivityTol);

/// Optimal qubit identification for arbitrary priors (three prior regions).
DensePOVM build_qubit_optimal_povm(Priors priors);

/// Coefficients (on 1_B(x)psi-_AC and 1_C(x)psi-_AB) used by build_qubit_optimal_povm.
std::pair<double, double> qubit_optimal_coefficients(Priors priors);

/// Equal-prior optimal universal identification: e = (2/3) G_mixed + (1/2) G_AS,
/// E1 = e 1_B(x)A_AC, E2 = e 1_C(x)A_AB.
DensePOVM build_hayashi_povm(int d);

/// |Psi_1> = psi1 (x) psi1 (x) psi2 or |Psi_2> = psi2 (x) psi1 (x) psi2.
struct PureProductState {
  StateVector psi1;
  StateVector psi2;
  int which = 1;

  StateVector vector() const;
};

/// eta1 <Psi1|E1|Psi1> + eta2 <Psi2|E2|Psi2>.
double identification_prob(const DensePOVM& povm, const StateVector& psi1, const StateVector& psi2, Priors priors);

/// Haar-random unit vector in C^d, deterministic in (seed, index).
StateVector haar_state(int d, std::uint64_t seed, std::uint64_t index);

/// Max over Haar pairs of Tr[E1 rho2] and Tr[E2 rho1].
double no_error_check(const DensePOVM& povm, std::size_t n_samples, std::uint64_t seed);

/// Two-qudit operator supplying the "states differ" comparison element.
using ComparisonBuilder = std::function<DenseOperator(int d)>;

/// E1 = q 1_B(x)F_AC, E2 = (1-q) 1_C(x)F_AB, E0 = 1 - E1 - E2.
DensePOVM mixing_strategy_povm(int d, double q, const ComparisonBuilder& f_dif);

struct MeanEstimate {
  std::size_t samples = 0;
  double mean_exact = 0.0;      // average of per-pair identification probability
  double stderr_exact = 0.0;    // sample standard error of that average
  std::size_t successes = 0;    // one sampled measurement per pair
  double frequency = 0.0;
  double binomial_stderr = 0.0;  // sqrt(f(1-f)/n)
};

/// Monte Carlo over Haar pairs. For each pair the hypothesis is drawn from the
/// priors and one POVM outcome is sampled by the Born rule.
MeanEstimate mean_identification_mc(const DensePOVM& povm, Priors priors, std::size_t n_samples, std::uint64_t seed);

struct EquatorialAnalysis {
  DenseOperator omega1;
  DenseOperator omega2;
  std::array<StateVector, 2> a;  // Omega2 a_j = 0
  std::array<StateVector, 2> b;  // Omega1 b_j = 0
  double kernel_residual = 0.0;  // max ||Omega2 a_j||, ||Omega1 b_j||
  double coefficient1 = 0.0;     // E1 = coefficient1 * sum_j |a_j><a_j|
  double coefficient2 = 0.0;
  DensePOVM povm;
  double max_diff_to_universal = 0.0;  // vs build_qubit_optimal_povm
};

/// Averaged states of equatorial qubits, their kernels, and the optimal POVM
/// supported on them. Coefficients come from maximizing
/// eta1*c1 + eta2*c2 subject to E0 >= 0.
EquatorialAnalysis equatorial_analysis(Priors priors = Priors::equal());

/// Max absolute entry of A - B.
double max_abs_diff(const DenseOperator& a, const DenseOperator& b);

}  // namespace cohui
