#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "cohui/errors.hpp"

namespace cohui {

/// Coherent amplitude alpha (dimensionless).
using ComplexAmplitude = std::complex<double>;

inline bool is_finite(ComplexAmplitude z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Prior probabilities of the two hypotheses (unknown matches reference 1 or 2).
class Priors {
 public:
  Priors() = default;

  /// eta2 is derived as 1 - eta1.
  explicit Priors(double eta1) : eta1_(eta1), eta2_(1.0 - eta1) {
    if (!(eta1 >= 0.0 && eta1 <= 1.0)) throw DomainError("prior eta1 must lie in [0,1]");
  }

  static Priors equal() { return Priors(0.5); }

  double eta1() const { return eta1_; }
  double eta2() const { return eta2_; }
  bool is_equal() const { return eta1_ == 0.5; }

 private:
  double eta1_ = 0.5;
  double eta2_ = 0.5;
};

}  // namespace cohui
