#include "cohui/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "cohui/rng.hpp"

namespace cohui {

BeamsplitterOp::BeamsplitterOp(std::size_t mode_a, std::size_t mode_b, double transmittivity)
    : mode_a_(mode_a), mode_b_(mode_b), transmittivity_(transmittivity) {
  if (mode_a == mode_b) throw DomainError("beamsplitter needs two distinct modes");
  if (!(transmittivity >= 0.0 && transmittivity <= 1.0)) {
    throw DomainError("transmittivity must lie in [0,1]");
  }
}

CoherentRegister::CoherentRegister(std::vector<ComplexAmplitude> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw ShapeError("coherent register needs at least one mode");
  for (const auto& a : amplitudes_) {
    if (!is_finite(a)) throw DomainError("coherent amplitude must be finite");
  }
}

ComplexAmplitude& CoherentRegister::at(std::size_t mode) {
  if (mode >= amplitudes_.size()) throw IndexError("mode index out of range");
  return amplitudes_[mode];
}

const ComplexAmplitude& CoherentRegister::at(std::size_t mode) const {
  if (mode >= amplitudes_.size()) throw IndexError("mode index out of range");
  return amplitudes_[mode];
}

double CoherentRegister::energy() const {
  double e = 0.0;
  for (const auto& a : amplitudes_) e += std::norm(a);
  return e;
}

Circuit::Circuit(std::size_t n_modes, std::vector<BeamsplitterOp> ops, std::vector<Detector> monitored)
    : n_modes_(n_modes) {
  if (n_modes == 0) throw ShapeError("circuit needs at least one mode");
  for (const auto& op : ops) add(op);
  for (auto& d : monitored) monitor(d.mode, std::move(d.label));
}

void Circuit::add(const BeamsplitterOp& op) {
  if (op.mode_a() >= n_modes_ || op.mode_b() >= n_modes_) throw IndexError("beamsplitter references a missing mode");
  ops_.push_back(op);
}

void Circuit::monitor(std::size_t mode, std::string label) {
  if (mode >= n_modes_) throw IndexError("monitored mode out of range");
  for (const auto& d : monitored_) {
    if (d.mode == mode) throw DomainError("mode is already monitored");
  }
  monitored_.push_back({mode, std::move(label)});
}

std::string to_string(const Outcome& outcome) {
  switch (outcome.kind) {
    case Outcome::Kind::kIdentified:
      return "identified(" + std::to_string(outcome.index) + ")";
    case Outcome::Kind::kInconclusive:
      return "inconclusive";
    case Outcome::Kind::kError:
      return "error";
  }
  return "unknown";
}

CoherentRegister apply_beamsplitter(const CoherentRegister& reg, const BeamsplitterOp& op) {
  CoherentRegister out = reg;
  const ComplexAmplitude a = reg.at(op.mode_a());
  const ComplexAmplitude b = reg.at(op.mode_b());
  const double st = std::sqrt(op.transmittivity());
  const double sr = std::sqrt(op.reflectivity());
  out.at(op.mode_a()) = st * a + sr * b;
  out.at(op.mode_b()) = -sr * a + st * b;
  return out;
}

double no_click_probability(ComplexAmplitude alpha) { return std::exp(-std::norm(alpha)); }

double click_probability(ComplexAmplitude alpha) { return -std::expm1(-std::norm(alpha)); }

double coherent_overlap_sq(ComplexAmplitude a, ComplexAmplitude b) { return std::exp(-std::norm(a - b)); }

CoherentRegister run_circuit(const Circuit& circuit, const CoherentRegister& input) {
  if (input.size() != circuit.n_modes()) throw ShapeError("register length does not match circuit");
  CoherentRegister reg = input;
  for (const auto& op : circuit.ops()) reg = apply_beamsplitter(reg, op);
  return reg;
}

ClickPattern sample_clicks(const CoherentRegister& output, const Circuit& circuit, std::uint64_t seed,
                           std::uint64_t shot) {
  CounterRng rng(seed, Stream::kClicks, shot);
  ClickPattern pattern;
  pattern.clicks.reserve(circuit.monitored().size());
  for (const auto& det : circuit.monitored()) {
    const double p = click_probability(output.at(det.mode));
    pattern.clicks.push_back(rng.uniform_open() < p);
  }
  return pattern;
}

Ui2Transmittivities ui2_transmittivities(double t1) {
  if (!(t1 > 0.0 && t1 < 1.0)) throw DomainError("T1 must lie in the open interval (0,1)");
  return {t1, 1.0 / (1.0 + t1), (1.0 - t1) / (2.0 - t1)};
}

Circuit build_ui2_circuit(double t1) {
  const auto t = ui2_transmittivities(t1);
  Circuit c(ui2::kModes);
  c.add(BeamsplitterOp(ui2::kModeD, ui2::kModeA, t.t1));  // clone A into D
  c.add(BeamsplitterOp(ui2::kModeB, ui2::kModeA, t.t2));  // compare with reference 1
  c.add(BeamsplitterOp(ui2::kModeD, ui2::kModeC, t.t3));  // compare with reference 2
  c.monitor(ui2::kModeA, "P2");
  c.monitor(ui2::kModeC, "P1");
  return c;
}

CoherentRegister ui2_input(ComplexAmplitude unknown, ComplexAmplitude alpha1, ComplexAmplitude alpha2) {
  std::vector<ComplexAmplitude> a(ui2::kModes);
  a[ui2::kModeD] = 0.0;
  a[ui2::kModeA] = unknown;
  a[ui2::kModeB] = alpha1;
  a[ui2::kModeC] = alpha2;
  return CoherentRegister(std::move(a));
}

Outcome classify_ui2(const ClickPattern& pattern) {
  if (pattern.size() != 2) throw ShapeError("identification pattern needs exactly two detectors");
  const bool p2 = pattern.clicks[0];
  const bool p1 = pattern.clicks[1];
  if (p1 && p2) return Outcome::error();
  if (p1) return Outcome::identified(1);
  if (p2) return Outcome::identified(2);
  return Outcome::inconclusive();
}

double Ui2Summary::success_frequency() const {
  return shots == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(shots);
}

Ui2Summary simulate_ui2(const Ui2Config& config, std::uint64_t shots, std::uint64_t seed,
                        std::vector<OutcomeRecord>* records) {
  if (config.fixed_true && *config.fixed_true != 1 && *config.fixed_true != 2) {
    throw DomainError("true reference must be 1 or 2");
  }
  const Circuit circuit = build_ui2_circuit(config.t1);
  const CoherentRegister out1 = run_circuit(circuit, ui2_input(config.alpha1, config.alpha1, config.alpha2));
  const CoherentRegister out2 = run_circuit(circuit, ui2_input(config.alpha2, config.alpha1, config.alpha2));

  Ui2Summary s;
  s.shots = shots;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    int truth = 1;
    if (config.fixed_true) {
      truth = *config.fixed_true;
    } else {
      CounterRng prior_rng(seed, Stream::kPriors, shot);
      truth = prior_rng.uniform_open() < config.priors.eta1() ? 1 : 2;
    }
    const ClickPattern pattern = sample_clicks(truth == 1 ? out1 : out2, circuit, seed, shot);
    const Outcome outcome = classify_ui2(pattern);
    switch (outcome.kind) {
      case Outcome::Kind::kIdentified:
        (outcome.index == 1 ? s.identified_1 : s.identified_2) += 1;
        (outcome.index == truth ? s.correct : s.misidentified) += 1;
        break;
      case Outcome::Kind::kInconclusive:
        ++s.inconclusive;
        break;
      case Outcome::Kind::kError:
        ++s.error;
        break;
    }
    if (records) records->push_back({seed, shot, pattern, outcome});
  }
  return s;
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : circuit.ops()) {
    ops.push_back({{"a", op.mode_a()}, {"b", op.mode_b()}, {"t", op.transmittivity()}});
  }
  nlohmann::json monitored = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& d : circuit.monitored()) {
    monitored.push_back(d.mode);
    labels.push_back(d.label);
  }
  return {{"n_modes", circuit.n_modes()}, {"ops", ops}, {"monitored", monitored}, {"labels", labels}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit c(j.at("n_modes").get<std::size_t>());
    for (const auto& op : j.at("ops")) {
      c.add(BeamsplitterOp(op.at("a").get<std::size_t>(), op.at("b").get<std::size_t>(), op.at("t").get<double>()));
    }
    const auto& monitored = j.at("monitored");
    const bool has_labels = j.contains("labels");
    if (has_labels && j.at("labels").size() != monitored.size()) {
      throw ShapeError("labels and monitored lists differ in length");
    }
    for (std::size_t i = 0; i < monitored.size(); ++i) {
      const std::string label =
          has_labels ? j.at("labels")[i].get<std::string>() : "D" + std::to_string(monitored[i].get<std::size_t>());
      c.monitor(monitored[i].get<std::size_t>(), label);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("malformed circuit JSON: ") + e.what());
  }
}

void write_shot_csv(std::ostream& os, const Circuit& circuit, const std::vector<OutcomeRecord>& records) {
  os << "seed,shot";
  for (const auto& d : circuit.monitored()) os << ",click_" << d.label;
  os << ",outcome\n";
  for (const auto& r : records) {
    os << r.seed << ',' << r.shot;
    for (bool c : r.pattern.clicks) os << ',' << (c ? 1 : 0);
    os << ',' << to_string(r.outcome) << '\n';
  }
}

}  // namespace cohui
