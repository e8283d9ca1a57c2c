#include "cohui/strategies.hpp"

#include <algorithm>
#include <cmath>

namespace cohui {
namespace {

// 1 - exp(-x) without cancellation near 0.
double one_minus_exp(double x) { return -std::expm1(-x); }

void require_nonnegative(double delta_abs) {
  if (!(delta_abs >= 0.0)) throw DomainError("delta_abs must be nonnegative");
}

// p_bs with T1 allowed on the closed interval; the formula is regular at both ends.
double p_bs_closed(double x, double t1, Priors priors) {
  const double p1 = one_minus_exp((1.0 - t1) / (2.0 - t1) * x);
  const double p2 = one_minus_exp(t1 / (1.0 + t1) * x);
  return priors.eta1() * p1 + priors.eta2() * p2;
}

}  // namespace

double p_sb(double delta_abs) {
  require_nonnegative(delta_abs);
  return one_minus_exp(delta_abs * delta_abs) / 4.0;
}

double p_opt(double delta_abs) {
  require_nonnegative(delta_abs);
  return one_minus_exp(delta_abs * delta_abs) / 3.0;
}

double p_sbf(double delta_abs) {
  require_nonnegative(delta_abs);
  return one_minus_exp(delta_abs * delta_abs / 2.0) / 2.0;
}

double p_idp_known(double delta_abs) {
  require_nonnegative(delta_abs);
  return one_minus_exp(delta_abs * delta_abs / 2.0);
}

double p_bs(ComplexAmplitude alpha1, ComplexAmplitude alpha2, double t1, Priors priors) {
  if (!(t1 > 0.0 && t1 < 1.0)) throw DomainError("T1 must lie in the open interval (0,1)");
  return p_bs_closed(std::norm(alpha1 - alpha2), t1, priors);
}

double p_bs_equal(double delta_abs) {
  require_nonnegative(delta_abs);
  return p_bs(0.0, delta_abs, 0.5, Priors::equal());
}

double critical_point_residual(double t1, double delta_abs) {
  const double x = delta_abs * delta_abs;
  const double ratio = (1.0 + t1) / (2.0 - t1);
  return ratio * ratio * std::exp(-x * ((1.0 - t1) / (2.0 - t1) - t1 / (1.0 + t1))) - 1.0;
}

double optimize_t1(ComplexAmplitude alpha1, ComplexAmplitude alpha2, Priors priors) {
  const double x = std::norm(alpha1 - alpha2);
  if (x == 0.0) throw DegenerateError("identical references: identification probability is identically zero");

  // p_bs is concave in T1, so the best grid node brackets the maximizer.
  constexpr int kGrid = 200;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = p_bs_closed(x, static_cast<double>(i) / kGrid, priors);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
  double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = p_bs_closed(x, c, priors);
  double fd = p_bs_closed(x, d, priors);
  while (hi - lo > 1e-10) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = p_bs_closed(x, c, priors);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = p_bs_closed(x, d, priors);
    }
  }
  return 0.5 * (lo + hi);
}

OrderingReport verify_ordering(std::span<const double> grid) {
  OrderingReport r;
  r.points = grid.size();
  r.sb_le_sbf = r.sbf_le_bs = r.opt_le_bs = r.bs_le_idp = -INFINITY;
  for (double d : grid) {
    const double sb = p_sb(d), opt = p_opt(d), sbf = p_sbf(d), bs = p_bs_equal(d), idp = p_idp_known(d);
    const double gaps[] = {sb - sbf, sbf - bs, opt - bs, bs - idp};
    r.sb_le_sbf = std::max(r.sb_le_sbf, gaps[0]);
    r.sbf_le_bs = std::max(r.sbf_le_bs, gaps[1]);
    r.opt_le_bs = std::max(r.opt_le_bs, gaps[2]);
    r.bs_le_idp = std::max(r.bs_le_idp, gaps[3]);
    for (double g : gaps) {
      if (g > 0.0) ++r.violations;
    }
  }
  r.max_violation = grid.empty() ? 0.0 : std::max({r.sb_le_sbf, r.sbf_le_bs, r.opt_le_bs, r.bs_le_idp});
  if (grid.empty()) r.sb_le_sbf = r.sbf_le_bs = r.opt_le_bs = r.bs_le_idp = 0.0;
  return r;
}

double mean_p_universal(int d, UniversalStrategy strategy) {
  if (d < 2) throw DomainError("dimension must be at least 2");
  const double frac = static_cast<double>(d - 1) / d;
  return strategy == UniversalStrategy::kSwapBased ? frac / 4.0 : frac / 3.0;
}

const std::vector<std::string>& curve_strategies() {
  static const std::vector<std::string> names{"sb", "opt", "sbf", "bs", "idp"};
  return names;
}

double curve_value(std::string_view strategy, double delta_abs) {
  if (strategy == "sb") return p_sb(delta_abs);
  if (strategy == "opt") return p_opt(delta_abs);
  if (strategy == "sbf") return p_sbf(delta_abs);
  if (strategy == "bs") return p_bs_equal(delta_abs);
  if (strategy == "idp") return p_idp_known(delta_abs);
  throw DomainError("unknown strategy '" + std::string(strategy) + "'");
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw DomainError("grid needs at least 2 steps");
  if (!(hi >= lo)) throw DomainError("grid maximum must not be below its minimum");
  std::vector<double> g(steps);
  const double h = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<CurvePoint> curve_table(std::span<const double> grid) {
  std::vector<CurvePoint> rows;
  rows.reserve(grid.size() * curve_strategies().size());
  for (const auto& s : curve_strategies()) {
    for (double d : grid) rows.push_back({d, s, curve_value(s, d)});
  }
  return rows;
}

}  // namespace cohui
