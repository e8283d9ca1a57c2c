#include "cohui/fock.hpp"

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace cohui {
namespace {

using Complex = std::complex<double>;

void require_cutoff(int n_max) {
  if (n_max < 0) throw DomainError("photon cutoff must be nonnegative");
}

// P(Poisson(mean) > n_max).
double poisson_tail(double mean, int n_max) {
  if (mean <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n_max) + 1.0, mean);
}

std::vector<Complex> coherent_coeffs(ComplexAmplitude alpha, int n_max) {
  std::vector<Complex> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = std::exp(-std::norm(alpha) / 2.0);
  for (int k = 1; k <= n_max; ++k) c[k] = c[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  return c;
}

long double binomial(int n, int k) {
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

long double log_factorial(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

std::vector<int> sector_of_index(int n_max) {
  std::vector<int> sector(two_mode_dim(n_max));
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) sector[two_mode_index(k, n - k)] = n;
  return sector;
}

}  // namespace

int two_mode_dim(int n_max) { return (n_max + 1) * (n_max + 2) / 2; }

int two_mode_index(int k, int l) {
  const int n = k + l;
  return n * (n + 1) / 2 + k;
}

FockVector coherent_fock(ComplexAmplitude alpha, int n_max) {
  require_cutoff(n_max);
  const auto c = coherent_coeffs(alpha, n_max);
  FockVector v;
  v.n_max = n_max;
  v.modes = 1;
  v.coeffs = Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
  v.tail_mass = poisson_tail(std::norm(alpha), n_max);
  return v;
}

FockVector coherent_pair_fock(ComplexAmplitude alpha, ComplexAmplitude beta, int n_max) {
  require_cutoff(n_max);
  const auto ca = coherent_coeffs(alpha, n_max);
  const auto cb = coherent_coeffs(beta, n_max);
  FockVector v;
  v.n_max = n_max;
  v.modes = 2;
  v.coeffs = Eigen::VectorXcd::Zero(two_mode_dim(n_max));
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) v.coeffs(two_mode_index(k, n - k)) = ca[k] * cb[n - k];
  // Total photon number of a product of coherent states is Poisson(|alpha|^2 + |beta|^2).
  v.tail_mass = poisson_tail(std::norm(alpha) + std::norm(beta), n_max);
  return v;
}

FockVector chi_vector(int n, int n_max) {
  require_cutoff(n_max);
  if (n < 0 || n > n_max) throw CutoffError("chi_N needs 0 <= N <= n_max");
  FockVector v;
  v.n_max = n_max;
  v.modes = 2;
  v.coeffs = Eigen::VectorXcd::Zero(two_mode_dim(n_max));
  for (int k = 0; k <= n; ++k) {
    v.coeffs(two_mode_index(k, n - k)) = static_cast<double>(std::sqrt(binomial(n, k) / std::pow(2.0L, n)));
  }
  return v;
}

FockOperator delta_operator(int n_max) {
  require_cutoff(n_max);
  FockOperator op;
  op.n_max = n_max;
  op.modes = 2;
  const int dim = two_mode_dim(n_max);
  op.entries = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::VectorXcd chi = chi_vector(n, n_max).coeffs;
    op.entries += chi * chi.adjoint();
  }
  op.entries *= M_PI / 2.0;
  return op;
}

FockOperator beamsplitter_fock(double transmittivity, int n_max) {
  require_cutoff(n_max);
  if (!(transmittivity >= 0.0 && transmittivity <= 1.0)) throw DomainError("transmittivity must lie in [0,1]");
  const long double st = std::sqrt(static_cast<long double>(transmittivity));
  const long double sr = std::sqrt(1.0L - static_cast<long double>(transmittivity));

  FockOperator op;
  op.n_max = n_max;
  op.modes = 2;
  const int dim = two_mode_dim(n_max);
  op.entries = Eigen::MatrixXcd::Zero(dim, dim);

  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k <= n; ++k) {
      const int l = n - k;
      // (sqrt(T) a^dag - sqrt(R) b^dag)^k (sqrt(R) a^dag + sqrt(T) b^dag)^l |0,0> / sqrt(k! l!)
      std::vector<long double> poly(static_cast<std::size_t>(n) + 1, 0.0L);  // coefficient of a^dag^p b^dag^(n-p)
      for (int i = 0; i <= k; ++i) {
        const long double left = binomial(k, i) * std::pow(st, i) * std::pow(-sr, k - i);
        if (left == 0.0L) continue;
        for (int j = 0; j <= l; ++j) {
          const long double right = binomial(l, j) * std::pow(sr, j) * std::pow(st, l - j);
          poly[i + j] += left * right;
        }
      }
      const long double in_norm = 0.5L * (log_factorial(k) + log_factorial(l));
      for (int p = 0; p <= n; ++p) {
        if (poly[p] == 0.0L) continue;
        const long double out_norm = 0.5L * (log_factorial(p) + log_factorial(n - p));
        op.entries(two_mode_index(p, n - p), two_mode_index(k, l)) =
            static_cast<double>(poly[p] * std::exp(out_norm - in_norm));
      }
    }
  }
  return op;
}

std::pair<FockOperator, FockOperator> comparator_povm_opt(int n_max) {
  require_cutoff(n_max);
  const int dim = two_mode_dim(n_max);
  FockOperator pi0{n_max, 2, Eigen::MatrixXcd::Zero(dim, dim)};
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::VectorXcd chi = chi_vector(n, n_max).coeffs;
    pi0.entries += chi * chi.adjoint();
  }
  FockOperator pi1{n_max, 2, Eigen::MatrixXcd::Identity(dim, dim) - pi0.entries};
  return {std::move(pi0), std::move(pi1)};
}

FockOperator vacuum_projector_y(int n_max) {
  require_cutoff(n_max);
  const int dim = two_mode_dim(n_max);
  FockOperator op{n_max, 2, Eigen::MatrixXcd::Zero(dim, dim)};
  for (int n = 0; n <= n_max; ++n) op.entries(two_mode_index(n, 0), two_mode_index(n, 0)) = 1.0;
  return op;
}

BsVsOptReport verify_bs_equals_opt(int n_max, double transmittivity) {
  if (n_max < 1) throw DomainError("verify_bs_equals_opt needs n_max >= 1");
  const FockOperator u = beamsplitter_fock(transmittivity, n_max);
  const FockOperator det = vacuum_projector_y(n_max);
  const Eigen::MatrixXcd pi0_bs = u.entries.adjoint() * det.entries * u.entries;
  const auto [pi0_opt, pi1_opt] = comparator_povm_opt(n_max);

  BsVsOptReport r;
  r.n_max = n_max;
  r.transmittivity = transmittivity;
  r.sectors_compared = n_max + 1;
  r.deviation = (pi0_bs - pi0_opt.entries).cwiseAbs().maxCoeff();
  r.note = "two-mode space truncated by total photon number; all sectors N <= n_max are complete and compared";
  return r;
}

double off_sector_magnitude(const FockOperator& op) {
  const auto sector = sector_of_index(op.n_max);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < op.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < op.entries.cols(); ++j)
      if (sector[i] != sector[j]) worst = std::max(worst, std::abs(op.entries(i, j)));
  return worst;
}

int safe_cutoff(double modulus) { return static_cast<int>(std::ceil(modulus * modulus + 8.0 * modulus + 20.0)); }

}  // namespace cohui
