#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "cohui/errors.hpp"
#include "cohui/qudit_povm.hpp"
#include "cohui/strategies.hpp"

using namespace cohui;
using Cd = std::complex<double>;

namespace {

// 1_B (x) A_AC written out index by index.
DenseOperator explicit_identity_b_antisym_ac(int d) {
  const int n = d * d * d;
  DenseOperator m = DenseOperator::Zero(n, n);
  auto idx = [d](int a, int b, int c) { return (a * d + b) * d + c; };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        m(idx(a, b, c), idx(a, b, c)) += 0.5;
        m(idx(c, b, a), idx(a, b, c)) -= 0.5;
      }
  return m;
}

int rank_of(const DenseOperator& m) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(m);
  int r = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r += es.eigenvalues()(i) > 0.5;
  return r;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

StateVector basis(int d, int i) {
  StateVector v = StateVector::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_SUITE("qudit_povm") {
  TEST_CASE("swap and antisymmetric projector") {
    for (int d : {2, 3, 4}) {
      const auto s = swap_operator(d);
      CHECK(max_abs_diff(s * s, DenseOperator::Identity(d * d, d * d)) == 0.0);
      const auto a = antisym_projector_pair(d);
      CHECK(max_abs_diff(a * a, a) <= 1e-15);
      CHECK(rank_of(a) == d * (d - 1) / 2);
    }
    // d=2: A = |psi-><psi-|
    StateVector psi_minus = StateVector::Zero(4);
    psi_minus(1) = std::sqrt(0.5);
    psi_minus(2) = -std::sqrt(0.5);
    CHECK(max_abs_diff(antisym_projector_pair(2), psi_minus * psi_minus.adjoint()) <= 1e-15);
    CHECK_THROWS_AS(swap_operator(1), DomainError);
    CHECK_THROWS_AS(antisym_projector_pair(1), DomainError);
  }

  TEST_CASE("embedding matches explicit index permutation") {
    for (int d : {2, 3}) {
      CHECK(max_abs_diff(embed_pair(antisym_projector_pair(d), Pair::kAC, d), explicit_identity_b_antisym_ac(d)) <= 1e-15);
    }
  }

  TEST_CASE("three-system symmetrizers") {
    for (int d : {2, 3, 4}) {
      const auto s = symmetrizer3(d), a = antisymmetrizer3(d);
      CHECK(max_abs_diff(s * s, s) <= 1e-14);
      CHECK(max_abs_diff(a * a, a) <= 1e-14);
      CHECK((s * a).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK(rank_of(s) == binom(d + 2, 3));
      CHECK(rank_of(a) == binom(d, 3));
    }
  }

  TEST_CASE("swap-based POVM certification examples") {
    const auto half = certify_povm(build_sb_povm(3, 0.5, 0.5));
    CHECK(half.pass);
    CHECK(std::abs(half.min_eigenvalue()) <= 1e-12);
    const auto over = certify_povm(build_sb_povm(3, 0.6, 0.6));
    CHECK_FALSE(over.pass);
    CHECK(over.min_eigenvalue() == doctest::Approx(-0.2).epsilon(1e-10));
    const auto over11 = certify_povm(build_sb_povm(3, 0.55, 0.55));
    CHECK_FALSE(over11.pass);
    CHECK(std::abs(over11.min_eigenvalue() + 0.1) <= 1e-10);
    CHECK(certify_povm(build_sb_povm(2, 0.6, 0.6)).pass);
    CHECK_THROWS_AS(build_sb_povm(3, -0.1, 0.5), DomainError);
  }

  TEST_CASE("block eigenvalue closed forms") {
    auto ev = e0_block_eigenvalues(0.5, 0.5);
    CHECK(ev.lambda3[0] == doctest::Approx(1.0));
    CHECK(ev.lambda3[1] == doctest::Approx(0.75));
    CHECK(ev.lambda3[2] == doctest::Approx(0.25));
    CHECK(std::any_of(ev.lambda6.begin(), ev.lambda6.end(), [](double v) { return std::abs(v) < 1e-15; }));
    ev = e0_block_eigenvalues(1.0, 0.0);
    CHECK(ev.lambda3[0] == doctest::Approx(1.0));
    CHECK(ev.lambda3[1] == doctest::Approx(1.0));
    CHECK(std::abs(ev.lambda3[2]) < 1e-15);
  }

  TEST_CASE("closed forms match numeric eigenvalues of assembled blocks") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i) {
      const double c1 = u(gen), c2 = u(gen);
      const auto ev = e0_block_eigenvalues(c1, c2);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> s3(assemble_q3(c1, c2));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> s6(assemble_q6(c1, c2));
      for (int k = 0; k < 3; ++k) CHECK(std::abs(s3.eigenvalues()(2 - k) - ev.lambda3[k]) <= 1e-12);
      for (int k = 0; k < 6; ++k) CHECK(std::abs(s6.eigenvalues()(5 - k) - ev.lambda6[k]) <= 1e-12);
      for (int k = 0; k + 1 < 6; ++k) CHECK(ev.lambda6[k] >= ev.lambda6[k + 1]);
    }
  }

  TEST_CASE("E0 spectrum is the union of block spectra") {
    const double c1 = 0.35, c2 = 0.4;
    const auto ev = e0_block_eigenvalues(c1, c2);
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(build_sb_povm(3, c1, c2).e0());
    const auto& vals = es.eigenvalues();
    auto present = [&](double x) {
      for (int i = 0; i < vals.size(); ++i)
        if (std::abs(vals(i) - x) < 1e-12) return true;
      return false;
    };
    for (double x : ev.lambda3) CHECK(present(x));
    for (double x : ev.lambda6) CHECK(present(x));
    CHECK(vals.minCoeff() == doctest::Approx(std::min(ev.lambda3[2], ev.lambda6[5])));
  }

  TEST_CASE("positivity iff c1 + c2 <= 1 on a 21x21 grid") {
    for (int a = 0; a <= 20; ++a)
      for (int b = 0; b <= 20; ++b) {
        const double c1 = a / 20.0, c2 = b / 20.0;
        CHECK(certify_povm(build_sb_povm(3, c1, c2)).pass == (a + b <= 20));
      }
  }

  TEST_CASE("qubit optimal POVM regions") {
    auto [l1, l2] = qubit_optimal_coefficients(Priors(0.5));
    CHECK(l1 == doctest::Approx(2.0 / 3));
    CHECK(l2 == doctest::Approx(2.0 / 3));
    const auto low = build_qubit_optimal_povm(Priors(0.1));
    CHECK(low.e1().cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(low.e2() * low.e2(), low.e2()) <= 1e-15);
    auto [b1, b2] = qubit_optimal_coefficients(Priors(0.2));
    CHECK(std::abs(b1) <= 1e-15);
    CHECK(b2 == doctest::Approx(1.0));
    auto [h1, h2] = qubit_optimal_coefficients(Priors(0.8));
    CHECK(h1 == doctest::Approx(1.0));
    CHECK(std::abs(h2) <= 1e-15);
    for (int i = 0; i <= 100; ++i) CHECK(certify_povm(build_qubit_optimal_povm(Priors(i / 100.0))).pass);
  }

  TEST_CASE("Hayashi POVM") {
    CHECK(antisymmetrizer3(2).cwiseAbs().maxCoeff() <= 1e-15);
    const auto h2 = build_hayashi_povm(2);
    const auto q = build_qubit_optimal_povm(Priors::equal());
    for (int k = 0; k < 3; ++k) CHECK(max_abs_diff(h2.elements[k], q.elements[k]) <= 1e-12);
    for (int d : {2, 3, 4}) CHECK(certify_povm(build_hayashi_povm(d)).pass);
    CHECK_THROWS_AS(build_hayashi_povm(1), DomainError);

    const auto h3 = build_hayashi_povm(3);
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto p1 = haar_state(3, 99, 2 * i), p2 = haar_state(3, 99, 2 * i + 1);
      const double law = (1 - std::norm(p1.dot(p2))) / 3;
      CHECK(std::abs(identification_prob(h3, p1, p2, Priors::equal()) - law) <= 1e-10);
    }
  }

  TEST_CASE("identification probability examples") {
    const auto p = haar_state(3, 1, 0);
    CHECK(std::abs(identification_prob(build_sb_povm(3, 0.5, 0.5), p, p, Priors::equal())) <= 1e-15);
    CHECK(std::abs(identification_prob(build_hayashi_povm(3), p, p, Priors::equal())) <= 1e-15);
    CHECK(identification_prob(build_hayashi_povm(2), basis(2, 0), basis(2, 1), Priors::equal()) == doctest::Approx(1.0 / 3));
    CHECK(identification_prob(build_sb_povm(2, 0.5, 0.5), basis(2, 0), basis(2, 1), Priors::equal()) == doctest::Approx(0.25));
    CHECK_THROWS_AS(identification_prob(build_sb_povm(2, 0.5, 0.5), basis(3, 0), basis(3, 1), Priors::equal()), ShapeError);
    PureProductState s{basis(2, 0), basis(2, 1), 2};
    // which=2 places psi2 in the unknown slot: |psi2>|psi1>|psi2>.
    const StateVector v = s.vector();
    CHECK(v.size() == 8);
    CHECK(std::abs(v((1 * 2 + 0) * 2 + 1) - Cd(1, 0)) <= 1e-15);
  }

  TEST_CASE("no-error residuals") {
    CHECK(no_error_check(build_hayashi_povm(3), 500, 4) <= 1e-10);
    CHECK(no_error_check(build_sb_povm(2, 0.5, 0.5), 500, 4) <= 1e-10);
    DensePOVM bad = build_sb_povm(2, 0.5, 0.5);
    const double eps = 1e-3;
    bad.elements[1] += eps * DenseOperator::Identity(8, 8);
    CHECK(no_error_check(bad, 100, 4) == doctest::Approx(eps).epsilon(1e-8));
  }

  TEST_CASE("mixing strategy") {
    const auto mix = mixing_strategy_povm(3, 0.5, antisym_projector_pair);
    const auto sb = build_sb_povm(3, 0.5, 0.5);
    for (int k = 0; k < 3; ++k) CHECK(max_abs_diff(mix.elements[k], sb.elements[k]) <= 1e-15);
    CHECK(mixing_strategy_povm(2, 0.0, antisym_projector_pair).e1().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(mixing_strategy_povm(2, 1.5, antisym_projector_pair), DomainError);
  }

  TEST_CASE("Haar states") {
    for (std::uint64_t i = 0; i < 1000; ++i) CHECK(std::abs(haar_state(4, 8, i).norm() - 1) <= 1e-12);
    CHECK(max_abs_diff(haar_state(3, 8, 5), haar_state(3, 8, 5)) == 0.0);
    for (int d : {2, 3}) {
      double s = 0.0;
      const int n = 100000;
      for (int i = 0; i < n; ++i) s += std::norm(haar_state(d, 21, 2 * i).dot(haar_state(d, 21, 2 * i + 1)));
      CHECK(std::abs(s / n - 1.0 / d) <= 0.005);
    }
  }

  TEST_CASE("Monte Carlo means within 3 sigma") {
    const std::size_t n = 20000;
    for (int d : {2, 3}) {
      const auto sb = mean_identification_mc(build_sb_povm(d, 0.5, 0.5), Priors::equal(), n, 3);
      const double p_sb_mean = mean_p_universal(d, UniversalStrategy::kSwapBased);
      CHECK(std::abs(sb.frequency - p_sb_mean) <= 3 * std::sqrt(p_sb_mean * (1 - p_sb_mean) / n));
      CHECK(std::abs(sb.mean_exact - p_sb_mean) <= 3 * sb.stderr_exact);
      const auto h = mean_identification_mc(build_hayashi_povm(d), Priors::equal(), n, 3);
      const double p_h = mean_p_universal(d, UniversalStrategy::kOptimal);
      CHECK(std::abs(h.frequency - p_h) <= 3 * std::sqrt(p_h * (1 - p_h) / n));
    }
  }

  TEST_CASE("equatorial analysis") {
    const auto eq = equatorial_analysis();
    CHECK(eq.omega1.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eq.omega2.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j < 2; ++j) {
      CHECK((eq.omega2 * eq.a[j]).norm() <= 1e-12);
      CHECK((eq.omega1 * eq.b[j]).norm() <= 1e-12);
    }
    CHECK(eq.kernel_residual <= 1e-12);
    CHECK(eq.max_diff_to_universal <= 1e-10);
    CHECK(certify_povm(eq.povm).pass);

    // Equatorial averages: Omega1 is the mean of |Psi_1><Psi_1| over real-plane qubit states.
    DenseOperator avg = DenseOperator::Zero(8, 8);
    const int m = 64;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) {
        const double t1 = 2 * M_PI * i / m, t2 = 2 * M_PI * k / m;
        StateVector p1(2), p2(2);
        p1 << std::sqrt(0.5), std::polar(std::sqrt(0.5), t1);
        p2 << std::sqrt(0.5), std::polar(std::sqrt(0.5), t2);
        const StateVector v = PureProductState{p1, p2, 1}.vector();
        avg += v * v.adjoint() / double(m * m);
      }
    CHECK(max_abs_diff(avg, eq.omega1) <= 1e-12);
  }

  TEST_CASE("equatorial optimum tracks the universal one for unequal priors") {
    for (double eta : {0.1, 0.3, 0.7}) {
      const auto eq = equatorial_analysis(Priors(eta));
      CHECK(eq.max_diff_to_universal <= 1e-6);
    }
  }
}
