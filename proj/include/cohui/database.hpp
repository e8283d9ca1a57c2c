#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohui/coherent.hpp"

namespace cohui {

// N-reference identification ("database search").
//
// Mode layout over 2N modes:
//   0 .. N-2    ancillas (vacuum)
//   N-1         unknown alpha_?
//   N .. 2N-1   references alpha_1 .. alpha_N
// For N = 2 this coincides with the (D, A, B, C) layout of build_ui2_circuit.

struct DatabaseSpec {
  std::vector<ComplexAmplitude> references;
  std::vector<double> priors;  // one per reference, summing to 1
  int true_index = 1;          // 1-based index of the reference matching alpha_?

  std::size_t n() const { return references.size(); }
};

/// Throws DomainError/ShapeError on an invalid spec.
void validate(const DatabaseSpec& spec);

/// Pairs (j, k), 1-based, whose references are closer than `tol`.
std::vector<std::pair<int, int>> near_duplicate_references(const DatabaseSpec& spec, double tol = 1e-9);

/// Equal priors, alpha_k = modulus * exp(2 pi i k / N).
DatabaseSpec ring_spec(double modulus, int n, int true_index = 1);

enum class Stage { kDistribute, kCompare };

/// Which input rides on port a of the beamsplitter.
enum class Orientation {
  kSplitFirst,      // (split, reference): reference port monitored, carries (alpha_k - alpha_?)/sqrt(N+1)
  kReferenceFirst,  // (reference, split): split port monitored, carries (alpha_? - alpha_k)/sqrt(N+1)
};

struct ScheduleEntry {
  Stage stage;
  int j;                  // 1-based ancilla / comparator index
  double transmittivity;  // as applied to the BeamsplitterOp
  Orientation orientation = Orientation::kSplitFirst;
};

/// T_j = (N-j)/(N-j+1), j = 1..N-1: splits alpha_? into N equal parts alpha_?/sqrt(N).
std::vector<ScheduleEntry> distribution_schedule(int n);

/// N comparators with T^c = 1/(N+1) (equivalently R^c = N/(N+1) with ports exchanged).
/// Comparators 1..N-1 use kReferenceFirst, comparator N uses kSplitFirst, which
/// reproduces the two-reference circuit exactly at N = 2.
std::vector<ScheduleEntry> comparator_schedule(int n);

/// Mode carrying alpha_?/sqrt(N) that feeds comparator k.
std::size_t split_mode(int n, int k);
std::size_t reference_mode(int n, int k);
std::size_t unknown_mode(int n);

/// 2N-1 beamsplitters over 2N modes; detector k (in order) belongs to comparator k.
Circuit build_database_circuit(int n);
Circuit build_database_circuit(const DatabaseSpec& spec);

/// Input register with alpha_? = references[truth-1].
CoherentRegister database_input(const DatabaseSpec& spec, int truth);

/// Exactly one silent detector k -> identified(k); anything else -> inconclusive.
Outcome classify_database(const ClickPattern& pattern);

/// Monitored amplitudes when alpha_? = alpha_truth.
std::vector<ComplexAmplitude> monitored_amplitudes(const DatabaseSpec& spec, int truth);

/// sum_j eta_j * P(only detector j silent | alpha_? = alpha_j), from simulated amplitudes.
double success_probability(const DatabaseSpec& spec);

/// Same sum with the printed closed-form exponent |alpha_k - alpha_j|^2 / sqrt(N-1).
double success_probability_sqrt_constant(const DatabaseSpec& spec);

struct RingProbability {
  double p_circuit;         // exponent constant 1/(N+1)
  double p_sqrt_constant;  // exponent constant 1/sqrt(N-1)
  double circuit_constant;
  double sqrt_constant;
};

/// prod_{k=1}^{N-1} (1 - exp(-c * 2 alpha^2 (1 - cos(2 pi k / N)))).
RingProbability ring_probability(double modulus, int n);

struct DatabaseSummary {
  std::uint64_t shots = 0;
  std::uint64_t correct = 0;
  std::uint64_t misidentified = 0;
  std::uint64_t inconclusive = 0;
  std::vector<std::uint64_t> identified;  // per reference, index k-1

  double frequency() const;
  double binomial_stderr() const;
};

/// Monte Carlo over shots. With draw_truth the matching reference is drawn from
/// the priors each shot; otherwise spec.true_index is used throughout.
DatabaseSummary simulate_database(const DatabaseSpec& spec, std::uint64_t shots, std::uint64_t seed,
                                  bool draw_truth = true);

}  // namespace cohui
