#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohui/types.hpp"

namespace cohui {

/// Two-mode mixing element. Reflectivity is always 1 - T.
///
/// Acting on (alpha, beta) in (mode_a, mode_b):
///   (alpha, beta) -> (sqrt(T) alpha + sqrt(R) beta, -sqrt(R) alpha + sqrt(T) beta)
class BeamsplitterOp {
 public:
  BeamsplitterOp(std::size_t mode_a, std::size_t mode_b, double transmittivity);

  std::size_t mode_a() const { return mode_a_; }
  std::size_t mode_b() const { return mode_b_; }
  double transmittivity() const { return transmittivity_; }
  double reflectivity() const { return 1.0 - transmittivity_; }

  bool operator==(const BeamsplitterOp&) const = default;

 private:
  std::size_t mode_a_;
  std::size_t mode_b_;
  double transmittivity_;
};

/// Product of coherent states, one amplitude per mode.
class CoherentRegister {
 public:
  explicit CoherentRegister(std::vector<ComplexAmplitude> amplitudes);

  std::size_t size() const { return amplitudes_.size(); }
  const ComplexAmplitude& operator[](std::size_t mode) const { return amplitudes_[mode]; }
  ComplexAmplitude& at(std::size_t mode);
  const ComplexAmplitude& at(std::size_t mode) const;
  const std::vector<ComplexAmplitude>& amplitudes() const { return amplitudes_; }

  /// Mean total photon number, sum |alpha_i|^2.
  double energy() const;

 private:
  std::vector<ComplexAmplitude> amplitudes_;
};

struct Detector {
  std::size_t mode;
  std::string label;

  bool operator==(const Detector&) const = default;
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_modes, std::vector<BeamsplitterOp> ops = {}, std::vector<Detector> monitored = {});

  std::size_t n_modes() const { return n_modes_; }
  const std::vector<BeamsplitterOp>& ops() const { return ops_; }
  const std::vector<Detector>& monitored() const { return monitored_; }

  void add(const BeamsplitterOp& op);
  void monitor(std::size_t mode, std::string label);

  bool operator==(const Circuit&) const = default;

 private:
  std::size_t n_modes_;
  std::vector<BeamsplitterOp> ops_;
  std::vector<Detector> monitored_;
};

/// One threshold-detector reading per monitored mode, in Circuit::monitored() order.
struct ClickPattern {
  std::vector<bool> clicks;

  std::size_t size() const { return clicks.size(); }
  bool operator==(const ClickPattern&) const = default;
};

struct Outcome {
  enum class Kind { kIdentified, kInconclusive, kError };

  Kind kind = Kind::kInconclusive;
  int index = 0;  // 1-based reference index when kind == kIdentified

  static Outcome identified(int k) { return {Kind::kIdentified, k}; }
  static Outcome inconclusive() { return {Kind::kInconclusive, 0}; }
  static Outcome error() { return {Kind::kError, 0}; }

  bool is_identified() const { return kind == Kind::kIdentified; }
  bool operator==(const Outcome&) const = default;
};

/// "identified(k)", "inconclusive" or "error".
std::string to_string(const Outcome& outcome);

struct OutcomeRecord {
  std::uint64_t seed;
  std::uint64_t shot;
  ClickPattern pattern;
  Outcome outcome;
};

CoherentRegister apply_beamsplitter(const CoherentRegister& reg, const BeamsplitterOp& op);

/// |<0|alpha>|^2 = exp(-|alpha|^2).
double no_click_probability(ComplexAmplitude alpha);

/// 1 - exp(-|alpha|^2), evaluated without cancellation.
double click_probability(ComplexAmplitude alpha);

/// |<a|b>|^2 = exp(-|a-b|^2).
double coherent_overlap_sq(ComplexAmplitude a, ComplexAmplitude b);

CoherentRegister run_circuit(const Circuit& circuit, const CoherentRegister& input);

/// Each monitored mode clicks independently with probability 1 - exp(-|alpha|^2).
/// Deterministic in (seed, shot).
ClickPattern sample_clicks(const CoherentRegister& output, const Circuit& circuit, std::uint64_t seed,
                           std::uint64_t shot);

// -- Three-beamsplitter identification circuit --------------------------------

/// Mode layout of the two-reference identification circuit.
namespace ui2 {
inline constexpr std::size_t kModeD = 0;  // ancilla, starts in vacuum
inline constexpr std::size_t kModeA = 1;  // unknown state
inline constexpr std::size_t kModeB = 2;  // reference 1
inline constexpr std::size_t kModeC = 3;  // reference 2
inline constexpr std::size_t kModes = 4;
}  // namespace ui2

struct Ui2Transmittivities {
  double t1, t2, t3;
};

/// T2 = 1/(1+T1), T3 = (1-T1)/(2-T1): both vacuum conditions hold at once.
Ui2Transmittivities ui2_transmittivities(double t1);

/// Circuit over (D, A, B, C). Detector 0 watches A (P2), detector 1 watches C (P1).
Circuit build_ui2_circuit(double t1);

CoherentRegister ui2_input(ComplexAmplitude unknown, ComplexAmplitude alpha1, ComplexAmplitude alpha2);

/// (P2 on A, P1 on C): only P1 -> identified(1), only P2 -> identified(2),
/// neither -> inconclusive, both -> error (excluded physically).
Outcome classify_ui2(const ClickPattern& pattern);

struct Ui2Config {
  ComplexAmplitude alpha1;
  ComplexAmplitude alpha2;
  double t1 = 0.5;
  Priors priors;
  /// When set, every shot uses this reference as the unknown; otherwise drawn from priors.
  std::optional<int> fixed_true;
};

struct Ui2Summary {
  std::uint64_t shots = 0;
  std::uint64_t identified_1 = 0;
  std::uint64_t identified_2 = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t error = 0;           // both detectors clicked
  std::uint64_t misidentified = 0;   // identified(k) with k != truth
  std::uint64_t correct = 0;

  double success_frequency() const;
};

/// Runs `shots` independent shots. When `records` is non-null, per-shot data is appended.
Ui2Summary simulate_ui2(const Ui2Config& config, std::uint64_t shots, std::uint64_t seed,
                        std::vector<OutcomeRecord>* records = nullptr);

// -- Serialization -------------------------------------------------------------

/// {"n_modes": n, "ops": [{"a":..,"b":..,"t":..}], "monitored": [...], "labels": [...]}
nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

/// CSV: seed,shot,click_<label>...,outcome
void write_shot_csv(std::ostream& os, const Circuit& circuit, const std::vector<OutcomeRecord>& records);

}  // namespace cohui
