#include "cohui/database.hpp"

#include <cmath>
#include <numeric>

#include "cohui/rng.hpp"

namespace cohui {
namespace {

void require_n(int n) {
  if (n < 2) throw DomainError("database needs at least two references");
}

}  // namespace

void validate(const DatabaseSpec& spec) {
  const auto n = spec.n();
  if (n < 2) throw DomainError("database needs at least two references");
  if (spec.priors.size() != n) throw ShapeError("one prior per reference is required");
  for (const auto& a : spec.references) {
    if (!is_finite(a)) throw DomainError("reference amplitude must be finite");
  }
  double sum = 0.0;
  for (double p : spec.priors) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("priors must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("priors must sum to 1");
  if (spec.true_index < 1 || spec.true_index > static_cast<int>(n)) throw IndexError("true_index out of range");
}

std::vector<std::pair<int, int>> near_duplicate_references(const DatabaseSpec& spec, double tol) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t j = 0; j < spec.n(); ++j)
    for (std::size_t k = j + 1; k < spec.n(); ++k)
      if (std::abs(spec.references[j] - spec.references[k]) < tol) {
        out.emplace_back(static_cast<int>(j) + 1, static_cast<int>(k) + 1);
      }
  return out;
}

DatabaseSpec ring_spec(double modulus, int n, int true_index) {
  require_n(n);
  DatabaseSpec spec;
  for (int k = 1; k <= n; ++k) spec.references.push_back(std::polar(modulus, 2.0 * M_PI * k / n));
  spec.priors.assign(n, 1.0 / n);
  spec.true_index = true_index;
  return spec;
}

std::vector<ScheduleEntry> distribution_schedule(int n) {
  require_n(n);
  std::vector<ScheduleEntry> s;
  for (int j = 1; j <= n - 1; ++j) {
    s.push_back({Stage::kDistribute, j, static_cast<double>(n - j) / (n - j + 1), Orientation::kSplitFirst});
  }
  return s;
}

std::vector<ScheduleEntry> comparator_schedule(int n) {
  require_n(n);
  const double tc = 1.0 / (n + 1);
  const double rc = static_cast<double>(n) / (n + 1);
  std::vector<ScheduleEntry> s;
  for (int k = 1; k <= n - 1; ++k) s.push_back({Stage::kCompare, k, rc, Orientation::kReferenceFirst});
  s.push_back({Stage::kCompare, n, tc, Orientation::kSplitFirst});
  return s;
}

std::size_t unknown_mode(int n) { return static_cast<std::size_t>(n) - 1; }

std::size_t split_mode(int n, int k) {
  if (k < 1 || k > n) throw IndexError("comparator index out of range");
  // Comparator 1 reuses the unknown mode, comparator k >= 2 takes ancilla k-1.
  return k == 1 ? unknown_mode(n) : static_cast<std::size_t>(k) - 2;
}

std::size_t reference_mode(int n, int k) {
  if (k < 1 || k > n) throw IndexError("reference index out of range");
  return static_cast<std::size_t>(n + k - 1);
}

Circuit build_database_circuit(int n) {
  require_n(n);
  Circuit c(2 * static_cast<std::size_t>(n));
  // Ancilla j sits on port a so it receives +sqrt(R_j) of the remaining amplitude.
  for (const auto& e : distribution_schedule(n)) {
    c.add(BeamsplitterOp(static_cast<std::size_t>(e.j) - 1, unknown_mode(n), e.transmittivity));
  }
  std::vector<std::size_t> watched;
  for (const auto& e : comparator_schedule(n)) {
    const std::size_t s = split_mode(n, e.j);
    const std::size_t r = reference_mode(n, e.j);
    if (e.orientation == Orientation::kReferenceFirst) {
      c.add(BeamsplitterOp(r, s, e.transmittivity));
      watched.push_back(s);
    } else {
      c.add(BeamsplitterOp(s, r, e.transmittivity));
      watched.push_back(r);
    }
  }
  for (int k = 1; k <= n; ++k) c.monitor(watched[k - 1], "C" + std::to_string(k));
  return c;
}

Circuit build_database_circuit(const DatabaseSpec& spec) {
  validate(spec);
  return build_database_circuit(static_cast<int>(spec.n()));
}

CoherentRegister database_input(const DatabaseSpec& spec, int truth) {
  const int n = static_cast<int>(spec.n());
  if (truth < 1 || truth > n) throw IndexError("truth index out of range");
  std::vector<ComplexAmplitude> a(2 * spec.n(), 0.0);
  a[unknown_mode(n)] = spec.references[truth - 1];
  for (int k = 1; k <= n; ++k) a[reference_mode(n, k)] = spec.references[k - 1];
  return CoherentRegister(std::move(a));
}

Outcome classify_database(const ClickPattern& pattern) {
  int silent = 0;
  int silent_index = 0;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (!pattern.clicks[k]) {
      ++silent;
      silent_index = static_cast<int>(k) + 1;
    }
  }
  return silent == 1 ? Outcome::identified(silent_index) : Outcome::inconclusive();
}

std::vector<ComplexAmplitude> monitored_amplitudes(const DatabaseSpec& spec, int truth) {
  const Circuit circuit = build_database_circuit(spec);
  const CoherentRegister out = run_circuit(circuit, database_input(spec, truth));
  std::vector<ComplexAmplitude> m;
  for (const auto& d : circuit.monitored()) m.push_back(out.at(d.mode));
  return m;
}

double success_probability(const DatabaseSpec& spec) {
  validate(spec);
  const int n = static_cast<int>(spec.n());
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    const auto m = monitored_amplitudes(spec, j);
    double term = no_click_probability(m[j - 1]);
    for (int k = 1; k <= n; ++k) {
      if (k != j) term *= click_probability(m[k - 1]);
    }
    total += spec.priors[j - 1] * term;
  }
  return total;
}

double success_probability_sqrt_constant(const DatabaseSpec& spec) {
  validate(spec);
  const int n = static_cast<int>(spec.n());
  const double c = 1.0 / std::sqrt(static_cast<double>(n - 1));
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    double term = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) term *= -std::expm1(-c * std::norm(spec.references[k] - spec.references[j]));
    }
    total += spec.priors[j] * term;
  }
  return total;
}

RingProbability ring_probability(double modulus, int n) {
  require_n(n);
  if (!(modulus >= 0.0)) throw DomainError("ring modulus must be nonnegative");
  RingProbability r{1.0, 1.0, 1.0 / (n + 1), 1.0 / std::sqrt(static_cast<double>(n - 1))};
  for (int k = 1; k <= n - 1; ++k) {
    const double dist_sq = 2.0 * modulus * modulus * (1.0 - std::cos(2.0 * M_PI * k / n));
    r.p_circuit *= -std::expm1(-r.circuit_constant * dist_sq);
    r.p_sqrt_constant *= -std::expm1(-r.sqrt_constant * dist_sq);
  }
  return r;
}

double DatabaseSummary::frequency() const {
  return shots == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(shots);
}

double DatabaseSummary::binomial_stderr() const {
  if (shots == 0) return 0.0;
  const double f = frequency();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(shots));
}

DatabaseSummary simulate_database(const DatabaseSpec& spec, std::uint64_t shots, std::uint64_t seed,
                                  bool draw_truth) {
  validate(spec);
  const int n = static_cast<int>(spec.n());
  const Circuit circuit = build_database_circuit(n);
  std::vector<CoherentRegister> outputs;
  for (int j = 1; j <= n; ++j) outputs.push_back(run_circuit(circuit, database_input(spec, j)));

  std::vector<double> cumulative(spec.priors.size());
  std::partial_sum(spec.priors.begin(), spec.priors.end(), cumulative.begin());

  DatabaseSummary s;
  s.shots = shots;
  s.identified.assign(spec.n(), 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    int truth = spec.true_index;
    if (draw_truth) {
      CounterRng rng(seed, Stream::kPriors, shot);
      const double u = rng.uniform_open();
      truth = n;
      for (int j = 0; j < n; ++j) {
        if (u < cumulative[j]) {
          truth = j + 1;
          break;
        }
      }
    }
    const Outcome o = classify_database(sample_clicks(outputs[truth - 1], circuit, seed, shot));
    if (o.is_identified()) {
      ++s.identified[o.index - 1];
      (o.index == truth ? s.correct : s.misidentified) += 1;
    } else {
      ++s.inconclusive;
    }
  }
  return s;
}

}  // namespace cohui
