#include "cohui/qudit_povm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "cohui/rng.hpp"

namespace cohui {
namespace {

using Complex = std::complex<double>;

void require_dim(int d) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
}

int dim3(int d) { return d * d * d; }

std::array<int, 3> digits3(int index, int d) { return {index / (d * d), (index / d) % d, index % d}; }

int index3(const std::array<int, 3>& x, int d) { return (x[0] * d + x[1]) * d + x[2]; }

StateVector kron3(const StateVector& a, const StateVector& b, const StateVector& c) {
  const auto d = a.size();
  StateVector out(d * d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k) out((i * d + j) * d + k) = a(i) * b(j) * c(k);
  return out;
}

int permutation_sign(const std::array<int, 3>& p) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

double expectation(const DenseOperator& op, const StateVector& v) { return v.dot(op * v).real(); }

double min_eigenvalue(const DenseOperator& m) {
  const DenseOperator h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensePOVM make_three_outcome(int d, DenseOperator e1, DenseOperator e2, std::string tag) {
  const int n = dim3(d);
  DensePOVM povm;
  povm.local_dim = d;
  DenseOperator e0 = DenseOperator::Identity(n, n) - e1 - e2;
  povm.elements = {std::move(e0), std::move(e1), std::move(e2)};
  povm.labels = {tag + ":E0", tag + ":E1", tag + ":E2"};
  return povm;
}

}  // namespace

DenseOperator swap_operator(int d) {
  require_dim(d);
  DenseOperator s = DenseOperator::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return s;
}

DenseOperator antisym_projector_pair(int d) {
  return 0.5 * (DenseOperator::Identity(d * d, d * d) - swap_operator(d));
}

DenseOperator embed_pair(const DenseOperator& pair_op, Pair pair, int d) {
  if (pair_op.rows() != d * d || pair_op.cols() != d * d) throw ShapeError("pair operator must be d^2 x d^2");
  int p = 0, q = 1, r = 2;
  switch (pair) {
    case Pair::kAB: p = 0; q = 1; r = 2; break;
    case Pair::kAC: p = 0; q = 2; r = 1; break;
    case Pair::kBC: p = 1; q = 2; r = 0; break;
  }
  const int n = dim3(d);
  DenseOperator out = DenseOperator::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    const auto x = digits3(row, d);
    for (int col = 0; col < n; ++col) {
      const auto y = digits3(col, d);
      if (x[r] != y[r]) continue;
      out(row, col) = pair_op(x[p] * d + x[q], y[p] * d + y[q]);
    }
  }
  return out;
}

DenseOperator permutation_operator(int d, const std::array<int, 3>& perm) {
  require_dim(d);
  const int n = dim3(d);
  DenseOperator out = DenseOperator::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const auto x = digits3(col, d);
    std::array<int, 3> y{};
    for (int i = 0; i < 3; ++i) y[perm[i]] = x[i];
    out(index3(y, d), col) = 1.0;
  }
  return out;
}

namespace {

DenseOperator s3_average(int d, bool signed_sum) {
  const int n = dim3(d);
  DenseOperator acc = DenseOperator::Zero(n, n);
  std::array<int, 3> perm{0, 1, 2};
  do {
    const double w = signed_sum ? permutation_sign(perm) : 1.0;
    acc += w * permutation_operator(d, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / 6.0;
}

}  // namespace

DenseOperator symmetrizer3(int d) { return s3_average(d, false); }

DenseOperator antisymmetrizer3(int d) { return s3_average(d, true); }

DensePOVM build_sb_povm(int d, double c1, double c2) {
  require_dim(d);
  if (!(c1 >= 0.0 && c2 >= 0.0)) throw DomainError("swap-based coefficients must be nonnegative");
  const DenseOperator asym = antisym_projector_pair(d);
  return make_three_outcome(d, c1 * embed_pair(asym, Pair::kAC, d), c2 * embed_pair(asym, Pair::kAB, d), "sb");
}

BlockEigenvalues e0_block_eigenvalues(double c1, double c2) {
  if (!(c1 >= 0.0 && c2 >= 0.0)) throw DomainError("swap-based coefficients must be nonnegative");
  const double s = c1 + c2;
  const double root = std::sqrt(c1 * c1 - c1 * c2 + c2 * c2);
  const double hi = (2.0 - s + root) / 2.0;
  const double lo = (2.0 - s - root) / 2.0;
  BlockEigenvalues ev;
  ev.c1 = c1;
  ev.c2 = c2;
  ev.lambda3 = {1.0, hi, lo};
  ev.lambda6 = {1.0, 1.0 - s, hi, hi, lo, lo};
  std::sort(ev.lambda3.begin(), ev.lambda3.end(), std::greater<>());
  std::sort(ev.lambda6.begin(), ev.lambda6.end(), std::greater<>());
  return ev;
}

Eigen::Matrix3d assemble_q3(double c1, double c2) {
  Eigen::Matrix3d q;
  q << 1 - c1 / 2, 0, c1 / 2,
       0, 1 - c2 / 2, c2 / 2,
       c1 / 2, c2 / 2, 1 - c1 / 2 - c2 / 2;
  return q;
}

Eigen::Matrix<double, 6, 6> assemble_q6(double c1, double c2) {
  const double x = 1 - c1 / 2 - c2 / 2;
  const double a = c1 / 2, b = c2 / 2;
  Eigen::Matrix<double, 6, 6> q;
  q << x, a, 0, 0, 0, b,
       a, x, b, 0, 0, 0,
       0, b, x, a, 0, 0,
       0, 0, a, x, b, 0,
       0, 0, 0, b, x, a,
       b, 0, 0, 0, a, x;
  return q;
}

double CertificationReport::min_eigenvalue() const {
  return min_eigenvalues.empty() ? 0.0 : *std::min_element(min_eigenvalues.begin(), min_eigenvalues.end());
}

CertificationReport certify_povm(const DensePOVM& povm, double tol) {
  if (povm.elements.empty()) throw ShapeError("POVM has no elements");
  const auto n = povm.elements.front().rows();
  CertificationReport r;
  r.tolerance = tol;
  DenseOperator sum = DenseOperator::Zero(n, n);
  for (const auto& e : povm.elements) {
    if (e.rows() != n || e.cols() != n) throw ShapeError("POVM elements differ in dimension");
    r.hermiticity_errors.push_back((e - e.adjoint()).cwiseAbs().maxCoeff());
    r.min_eigenvalues.push_back(min_eigenvalue(e));
    sum += e;
  }
  r.completeness_error = (sum - DenseOperator::Identity(n, n)).cwiseAbs().maxCoeff();
  const double herm = *std::max_element(r.hermiticity_errors.begin(), r.hermiticity_errors.end());
  r.pass = herm <= 1e-12 && r.completeness_error <= 1e-10 && r.min_eigenvalue() >= -tol;
  return r;
}

std::pair<double, double> qubit_optimal_coefficients(Priors priors) {
  const double eta = priors.eta1();
  if (eta < 0.2) return {0.0, 1.0};
  if (eta > 0.8) return {1.0, 0.0};
  const double lambda = (2.0 / 3.0) * (2.0 - std::sqrt(priors.eta2() / priors.eta1()));
  return {lambda, (4.0 - 4.0 * lambda) / (4.0 - 3.0 * lambda)};
}

DensePOVM build_qubit_optimal_povm(Priors priors) {
  const auto [c1, c2] = qubit_optimal_coefficients(priors);
  const DenseOperator psi_minus = antisym_projector_pair(2);
  return make_three_outcome(2, c1 * embed_pair(psi_minus, Pair::kAC, 2), c2 * embed_pair(psi_minus, Pair::kAB, 2),
                            "qubit-opt");
}

DensePOVM build_hayashi_povm(int d) {
  require_dim(d);
  const int n = dim3(d);
  const DenseOperator sym = symmetrizer3(d);
  const DenseOperator asym = antisymmetrizer3(d);
  const DenseOperator mixed = DenseOperator::Identity(n, n) - sym - asym;
  const DenseOperator e = (2.0 / 3.0) * mixed + 0.5 * asym;
  const DenseOperator pair = antisym_projector_pair(d);
  return make_three_outcome(d, e * embed_pair(pair, Pair::kAC, d), e * embed_pair(pair, Pair::kAB, d), "hayashi");
}

StateVector PureProductState::vector() const {
  if (psi1.size() != psi2.size()) throw ShapeError("factor dimensions differ");
  if (which == 1) return kron3(psi1, psi1, psi2);
  if (which == 2) return kron3(psi2, psi1, psi2);
  throw DomainError("which must be 1 or 2");
}

double identification_prob(const DensePOVM& povm, const StateVector& psi1, const StateVector& psi2, Priors priors) {
  const auto d = psi1.size();
  if (psi2.size() != d || d != povm.local_dim) throw ShapeError("state dimension does not match POVM");
  const StateVector big1 = kron3(psi1, psi1, psi2);
  const StateVector big2 = kron3(psi2, psi1, psi2);
  return priors.eta1() * expectation(povm.e1(), big1) + priors.eta2() * expectation(povm.e2(), big2);
}

StateVector haar_state(int d, std::uint64_t seed, std::uint64_t index) {
  if (d < 1) throw DomainError("dimension must be at least 1");
  CounterRng rng(seed, Stream::kHaar, index);
  StateVector v(d);
  for (int i = 0; i < d; ++i) {
    std::normal_distribution<double> gauss;
    const double re = gauss(rng);
    gauss.reset();
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

double no_error_check(const DensePOVM& povm, std::size_t n_samples, std::uint64_t seed) {
  const int d = povm.local_dim;
  double worst = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const StateVector psi1 = haar_state(d, seed, 2 * i);
    const StateVector psi2 = haar_state(d, seed, 2 * i + 1);
    const double wrong1 = expectation(povm.e1(), kron3(psi2, psi1, psi2));
    const double wrong2 = expectation(povm.e2(), kron3(psi1, psi1, psi2));
    worst = std::max({worst, std::abs(wrong1), std::abs(wrong2)});
  }
  return worst;
}

DensePOVM mixing_strategy_povm(int d, double q, const ComparisonBuilder& f_dif) {
  require_dim(d);
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("mixing weight q must lie in [0,1]");
  const DenseOperator f = f_dif(d);
  return make_three_outcome(d, q * embed_pair(f, Pair::kAC, d), (1.0 - q) * embed_pair(f, Pair::kAB, d), "mix");
}

MeanEstimate mean_identification_mc(const DensePOVM& povm, Priors priors, std::size_t n_samples,
                                    std::uint64_t seed) {
  const int d = povm.local_dim;
  MeanEstimate m;
  m.samples = n_samples;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const StateVector psi1 = haar_state(d, seed, 2 * i);
    const StateVector psi2 = haar_state(d, seed, 2 * i + 1);
    const double e1 = expectation(povm.e1(), kron3(psi1, psi1, psi2));
    const double e2 = expectation(povm.e2(), kron3(psi2, psi1, psi2));
    const double p = priors.eta1() * e1 + priors.eta2() * e2;
    sum += p;
    sum_sq += p * p;

    CounterRng rng(seed, Stream::kOutcome, i);
    const bool first = rng.uniform_open() < priors.eta1();
    if (rng.uniform_open() < (first ? e1 : e2)) ++m.successes;
  }
  if (n_samples > 0) {
    const double n = static_cast<double>(n_samples);
    m.mean_exact = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * m.mean_exact * m.mean_exact) / (n - 1)) : 0.0;
    m.stderr_exact = std::sqrt(var / n);
    m.frequency = static_cast<double>(m.successes) / n;
    m.binomial_stderr = std::sqrt(m.frequency * (1.0 - m.frequency) / n);
  }
  return m;
}

double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("operators differ in shape");
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

// Min eigenvalue of 1 - c1 P1 - c2 P2.
double e0_floor(const DenseOperator& p1, const DenseOperator& p2, double c1, double c2) {
  const auto n = p1.rows();
  return min_eigenvalue(DenseOperator::Identity(n, n) - c1 * p1 - c2 * p2);
}

// Largest t in [0,1] with feasible(t); feasible must be monotone (true then false).
template <class F>
double bisect_feasible(F feasible) {
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

EquatorialAnalysis equatorial_analysis(Priors priors) {
  const double s = 1.0 / std::sqrt(2.0);
  DenseOperator pair_avg = DenseOperator::Zero(4, 4);  // |00><00| + |11><11| + 2|psi+><psi+|
  StateVector psi_plus = StateVector::Zero(4);
  psi_plus(1) = s;
  psi_plus(2) = s;
  pair_avg(0, 0) = 1.0;
  pair_avg(3, 3) = 1.0;
  pair_avg += 2.0 * psi_plus * psi_plus.adjoint();

  EquatorialAnalysis r;
  r.omega1 = embed_pair(pair_avg, Pair::kAB, 2) / 8.0;
  r.omega2 = embed_pair(pair_avg, Pair::kAC, 2) / 8.0;

  // a_j = |j>_B (x) psi-_AC, b_j = |j>_C (x) psi-_AB.
  for (int j = 0; j < 2; ++j) {
    StateVector a = StateVector::Zero(8), b = StateVector::Zero(8);
    a(index3({0, j, 1}, 2)) = s;
    a(index3({1, j, 0}, 2)) = -s;
    b(index3({0, 1, j}, 2)) = s;
    b(index3({1, 0, j}, 2)) = -s;
    r.a[j] = a;
    r.b[j] = b;
    r.kernel_residual = std::max({r.kernel_residual, (r.omega2 * a).norm(), (r.omega1 * b).norm()});
  }

  DenseOperator span_a = DenseOperator::Zero(8, 8), span_b = DenseOperator::Zero(8, 8);
  for (int j = 0; j < 2; ++j) {
    span_a += r.a[j] * r.a[j].adjoint();
    span_b += r.b[j] * r.b[j].adjoint();
  }

  // Feasible (c1, c2) form a convex set; the objective eta1 c1 + eta2 c2 is linear.
  auto b_max = [&](double c1) {
    return bisect_feasible([&](double c2) { return e0_floor(span_a, span_b, c1, c2) >= 0.0; });
  };
  if (priors.is_equal()) {
    // The region is symmetric under c1 <-> c2, so a symmetric maximizer exists.
    const double c = bisect_feasible([&](double t) { return e0_floor(span_a, span_b, t, t) >= 0.0; });
    r.coefficient1 = r.coefficient2 = c;
  } else {
    auto objective = [&](double c1) { return priors.eta1() * c1 + priors.eta2() * b_max(c1); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = objective(c), fd = objective(d);
    while (hi - lo > 1e-11) {
      if (fc >= fd) {
        hi = d; d = c; fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = objective(c);
      } else {
        lo = c; c = d; fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = objective(d);
      }
    }
    double best = 0.5 * (lo + hi);
    // Endpoints are candidates too: the optimum sits on a corner outside the middle prior band.
    for (double edge : {0.0, 1.0}) {
      if (objective(edge) > objective(best)) best = edge;
    }
    r.coefficient1 = best;
    r.coefficient2 = b_max(best);
  }

  r.povm = make_three_outcome(2, r.coefficient1 * span_a, r.coefficient2 * span_b, "equatorial");
  const DensePOVM universal = build_qubit_optimal_povm(priors);
  for (std::size_t k = 0; k < 3; ++k) {
    r.max_diff_to_universal = std::max(r.max_diff_to_universal, max_abs_diff(r.povm.elements[k], universal.elements[k]));
  }
  return r;
}

}  // namespace cohui
