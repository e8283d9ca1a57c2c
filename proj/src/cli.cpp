#include "cohui/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohui/coherent.hpp"
#include "cohui/database.hpp"
#include "cohui/fock.hpp"
#include "cohui/qudit_povm.hpp"
#include "cohui/rng.hpp"
#include "cohui/strategies.hpp"

namespace cohui {

using nlohmann::json;

std::complex<double> parse_amplitude(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c) || c == '(' || c == ')'; }),
          t.end());
  if (t.empty()) throw std::invalid_argument("empty amplitude");
  const auto comma = t.find(',');
  std::size_t used = 0;
  const double re = std::stod(t.substr(0, comma), &used);
  if (used != (comma == std::string::npos ? t.size() : comma)) throw std::invalid_argument("bad amplitude: " + text);
  double im = 0.0;
  if (comma != std::string::npos) {
    const std::string rest = t.substr(comma + 1);
    im = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("bad amplitude: " + text);
  }
  const std::complex<double> z(re, im);
  if (!is_finite(z)) throw std::invalid_argument("amplitude must be finite: " + text);
  return z;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json amplitude_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> amplitude_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  if (j.is_string()) return parse_amplitude(j.get<std::string>());
  throw UsageError("cannot read amplitude from " + j.dump());
}

// Writes to stdout for "-" or to a file.
void emit(const std::string& path, const std::string& payload, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << payload;
  if (!f) throw IoError("failed writing '" + path + "'");
}

json report_header(const std::string& subcommand, const json& config) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"subcommand", subcommand}, {"config", config}};
}

// ---------------------------------------------------------------------------
// verify battery

json check_entry(const std::string& name, double residual, double tol, json extra = json::object()) {
  json j = {{"check", name}, {"residual", residual}, {"tolerance", tol}, {"pass", residual <= tol}};
  j.update(extra);
  return j;
}

json qudit_battery(int d, std::uint64_t seed, std::size_t samples) {
  json checks = json::array();
  const json dim = {{"dim", d}};

  // Closed-form block eigenvalues vs dense eigensolver.
  {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
      CounterRng rng(seed, Stream::kParams, i);
      const double c1 = rng.uniform_open(), c2 = rng.uniform_open();
      const auto ev = e0_block_eigenvalues(c1, c2);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> s3(assemble_q3(c1, c2));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> s6(assemble_q6(c1, c2));
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(s3.eigenvalues()(2 - k) - ev.lambda3[k]));
      for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(s6.eigenvalues()(5 - k) - ev.lambda6[k]));
    }
    checks.push_back(check_entry("sb_block_eigenvalues", worst, 1e-12, {{"dim", d}, {"params", {{"pairs", 50}}}}));
  }

  // Blocks read out of the assembled E0 agree with Q3/Q6.
  {
    const double c1 = 0.3, c2 = 0.55;
    const DensePOVM sb = build_sb_povm(d, c1, c2);
    auto idx = [d](int a, int b, int c) { return (a * d + b) * d + c; };
    double worst = 0.0;
    const int i = 0, j = 1;
    const int q3_basis[3] = {idx(i, i, j), idx(i, j, i), idx(j, i, i)};
    const auto q3 = assemble_q3(c1, c2);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(sb.e0()(q3_basis[r], q3_basis[c]) - q3(r, c)));
    if (d >= 3) {
      const int k = 2;
      const int q6_basis[6] = {idx(i, j, k), idx(k, j, i), idx(j, k, i), idx(i, k, j), idx(k, i, j), idx(j, i, k)};
      const auto q6 = assemble_q6(c1, c2);
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) worst = std::max(worst, std::abs(sb.e0()(q6_basis[r], q6_basis[c]) - q6(r, c)));
    }
    checks.push_back(check_entry("sb_e0_blocks_match_q3_q6", worst, 1e-14, {{"dim", d}, {"params", {{"c1", c1}, {"c2", c2}}}}));
  }

  // Positivity iff c1 + c2 <= 1 (needs a 6x6 block, so d >= 3).
  if (d >= 3) {
    int mismatches = 0;
    for (int a = 0; a <= 20; ++a)
      for (int b = 0; b <= 20; ++b) {
        const bool pass = certify_povm(build_sb_povm(d, a / 20.0, b / 20.0)).pass;
        if (pass != (a + b <= 20)) ++mismatches;
      }
    checks.push_back(check_entry("sb_positivity_iff_sum_le_1", mismatches, 0.0, {{"dim", d}, {"params", {{"grid", "21x21"}}}}));
  }

  auto certify_check = [&](const std::string& name, const DensePOVM& povm, json params) {
    const auto rep = certify_povm(povm);
    const double residual = std::max({0.0, -rep.min_eigenvalue() - kPositivityTol, rep.completeness_error - 1e-10});
    json e = check_entry(name, residual, 0.0, {{"dim", povm.local_dim}, {"params", params}});
    e["min_eigenvalue"] = rep.min_eigenvalue();
    e["completeness_error"] = rep.completeness_error;
    e["pass"] = rep.pass;
    checks.push_back(e);
  };

  certify_check("sb_certify_c_half", build_sb_povm(d, 0.5, 0.5), {{"c1", 0.5}, {"c2", 0.5}});
  const DensePOVM hayashi = build_hayashi_povm(d);
  certify_check("hayashi_certify", hayashi, json::object());
  for (double eta : {0.0, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 1.0}) {
    certify_check("qubit_optimal_certify", build_qubit_optimal_povm(Priors(eta)), {{"eta1", eta}});
  }

  checks.push_back(check_entry("hayashi_no_error", no_error_check(hayashi, samples, seed), 1e-10,
                               {{"dim", d}, {"params", {{"samples", samples}}}}));
  checks.push_back(check_entry("sb_no_error", no_error_check(build_sb_povm(d, 0.5, 0.5), samples, seed), 1e-10,
                               {{"dim", d}, {"params", {{"samples", samples}}}}));

  {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      const StateVector p1 = haar_state(d, seed + 1, 2 * i), p2 = haar_state(d, seed + 1, 2 * i + 1);
      const double expected = (1.0 - std::norm(p1.dot(p2))) / 3.0;
      worst = std::max(worst, std::abs(identification_prob(hayashi, p1, p2, Priors::equal()) - expected));
    }
    checks.push_back(check_entry("hayashi_probability_law", worst, 1e-10, {{"dim", d}, {"params", {{"pairs", 200}}}}));
  }

  checks.push_back(check_entry("hayashi_d2_equals_qubit_optimal",
                               [] {
                                 const DensePOVM h = build_hayashi_povm(2);
                                 const DensePOVM q = build_qubit_optimal_povm(Priors::equal());
                                 double w = 0.0;
                                 for (int k = 0; k < 3; ++k) w = std::max(w, max_abs_diff(h.elements[k], q.elements[k]));
                                 return w;
                               }(),
                               1e-12, {{"dim", 2}, {"params", json::object()}}));

  {
    const DensePOVM mix = mixing_strategy_povm(d, 0.5, antisym_projector_pair);
    const DensePOVM sb = build_sb_povm(d, 0.5, 0.5);
    double w = 0.0;
    for (int k = 0; k < 3; ++k) w = std::max(w, max_abs_diff(mix.elements[k], sb.elements[k]));
    checks.push_back(check_entry("mixing_half_equals_sb", w, 1e-15, {{"dim", d}, {"params", {{"q", 0.5}}}}));
  }

  {
    const auto eq = equatorial_analysis(Priors::equal());
    checks.push_back(check_entry("equatorial_kernel", eq.kernel_residual, 1e-12, {{"dim", 2}, {"params", json::object()}}));
    checks.push_back(check_entry("equatorial_equals_universal", eq.max_diff_to_universal, 1e-10,
                                 {{"dim", 2}, {"params", {{"c1", eq.coefficient1}, {"c2", eq.coefficient2}}}}));
  }
  return checks;
}

json fock_battery(int n_max) {
  json checks = json::array();
  auto add = [&](const std::string& name, double deviation, double tol) {
    checks.push_back({{"check", name}, {"n_max", n_max}, {"deviation", deviation}, {"tolerance", tol},
                      {"pass", deviation <= tol}});
  };
  const int dim = two_mode_dim(n_max);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

  {
    Eigen::MatrixXcd chis(dim, n_max + 1);
    for (int n = 0; n <= n_max; ++n) chis.col(n) = chi_vector(n, n_max).coeffs;
    const Eigen::MatrixXcd gram = chis.adjoint() * chis;
    add("chi_orthonormality", (gram - Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff(), 1e-14);
  }
  {
    const Eigen::MatrixXcd p = delta_operator(n_max).entries * (2.0 / M_PI);
    add("delta_projector_idempotent", (p * p - p).cwiseAbs().maxCoeff(), 1e-12);
    add("delta_projector_trace", std::abs(p.trace().real() - (n_max + 1)), 1e-10);
  }
  const FockOperator u = beamsplitter_fock(0.5, n_max);
  add("bs_unitarity", (u.entries.adjoint() * u.entries - id).cwiseAbs().maxCoeff(), 1e-12);
  add("bs_sector_preservation", off_sector_magnitude(u), 1e-14);
  {
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      Eigen::VectorXcd fock_n0 = Eigen::VectorXcd::Zero(dim);
      fock_n0(two_mode_index(n, 0)) = 1.0;
      worst = std::max(worst, (u.entries.adjoint() * fock_n0 - chi_vector(n, n_max).coeffs).cwiseAbs().maxCoeff());
    }
    add("bs_vacuum_image_is_chi", worst, 1e-12);
  }
  {
    const auto [pi0, pi1] = comparator_povm_opt(n_max);
    const double w = std::max({(pi0.entries * pi0.entries - pi0.entries).cwiseAbs().maxCoeff(),
                               (pi0.entries * pi1.entries).cwiseAbs().maxCoeff(),
                               (pi0.entries - pi0.entries.adjoint()).cwiseAbs().maxCoeff()});
    add("comparator_projector_laws", w, 1e-12);
    double no_error = 0.0;
    for (std::complex<double> a : {std::complex<double>(0, 0), {1, 0}, {1, 1}}) {
      const auto v = coherent_pair_fock(a, a, n_max).coeffs;
      no_error = std::max(no_error, std::abs(v.dot(pi1.entries * v).real()));
    }
    add("comparator_no_error", no_error, 1e-10);
  }
  {
    const auto rep = verify_bs_equals_opt(n_max);
    checks.push_back({{"check", "bs_equals_opt"}, {"n_max", n_max}, {"deviation", rep.deviation}, {"tolerance", 1e-11},
                      {"pass", rep.deviation <= 1e-11}, {"sectors_compared", rep.sectors_compared}, {"note", rep.note}});
  }
  return checks;
}

// ---------------------------------------------------------------------------
// config file support

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"curves", "simulate", "verify", "database", "optimize-t1"};
  return names;
}

// Expands --config PATH into ordinary arguments. Command-line values follow the
// file's values, so they take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return args;

  std::ifstream f(*config_path);
  if (!f) throw UsageError("cannot read config file '" + *config_path + "'");
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

  std::string sub;
  auto cli_sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(subcommand_names().begin(), subcommand_names().end(), a) != subcommand_names().end();
  });
  if (cli_sub != rest.end()) {
    sub = *cli_sub;
    rest.erase(cli_sub);
  } else if (cfg.contains("subcommand")) {
    sub = cfg["subcommand"].get<std::string>();
  } else {
    throw UsageError("no subcommand given on the command line or in the config file");
  }

  std::vector<std::string> out{args[0], sub};
  for (const auto& [key, value] : cfg.items()) {
    if (key == "subcommand") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(value.dump());
    } else {
      out.push_back(flag);
      out.push_back(value.dump());
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::string format_sig9(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Unambiguous identification of coherent states: simulation and verification"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_path = "-";
  std::string format;

  // curves
  auto* curves = app.add_subcommand("curves", "Identification probability curves (CSV: strategy,delta_abs,probability)");
  double grid_min = 0.0, grid_max = 3.0;
  std::size_t grid_steps = 301;
  curves->add_option("--min", grid_min, "Smallest |alpha1 - alpha2|")->capture_default_str();
  curves->add_option("--max", grid_max, "Largest |alpha1 - alpha2|")->capture_default_str();
  curves->add_option("--steps", grid_steps, "Number of grid points (>= 2)")->capture_default_str();
  curves->add_option("--out", out_path, "Output path, '-' for stdout");
  curves->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo of the three-beamsplitter identification circuit");
  std::string alpha1_s, alpha2_s;
  std::optional<int> true_ref;
  double t1 = 0.5, eta1 = 0.5;
  std::optional<std::uint64_t> shots, seed;
  std::string shots_csv;
  simulate->add_option("--alpha1", alpha1_s, "Reference 1 amplitude 're,im'")->required();
  simulate->add_option("--alpha2", alpha2_s, "Reference 2 amplitude 're,im'")->required();
  simulate->add_option("--true", true_ref, "Reference matching the unknown (1 or 2); drawn from priors if omitted")
      ->check(CLI::Range(1, 2));
  simulate->add_option("--t1", t1, "First beamsplitter transmittivity")->capture_default_str();
  simulate->add_option("--eta1", eta1, "Prior of reference 1")->capture_default_str();
  simulate->add_option("--shots", shots, "Number of shots")->required();
  simulate->add_option("--seed", seed, "RNG seed")->required();
  simulate->add_option("--shots-csv", shots_csv, "Also write per-shot CSV rows to this path");
  simulate->add_option("--out", out_path, "Output path, '-' for stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "Certification battery (JSON report)");
  bool want_fock = false, want_qudit = false;
  int n_max = 20, dim = 3;
  std::uint64_t verify_seed = 2024;
  std::size_t verify_samples = 500;
  verify->add_flag("--fock", want_fock, "Run the truncated Fock-space checks");
  verify->add_flag("--qudit", want_qudit, "Run the finite-dimensional POVM checks");
  verify->add_option("--n-max", n_max, "Photon cutoff for Fock checks")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--d", dim, "Qudit dimension")->capture_default_str()->check(CLI::Range(2, 5));
  verify->add_option("--seed", verify_seed, "Seed for sampled test states")->capture_default_str();
  verify->add_option("--samples", verify_samples, "Haar pairs for no-error checks")->capture_default_str();
  verify->add_option("--out", out_path, "Output path, '-' for stdout");

  // database
  auto* database = app.add_subcommand("database", "N-reference identification circuit");
  std::optional<int> db_n;
  std::optional<double> ring_alpha;
  std::string refs_json, priors_json;
  std::optional<int> db_true;
  database->add_option("--n", db_n, "Number of references (with --ring-alpha)")->check(CLI::Range(2, 64));
  database->add_option("--ring-alpha", ring_alpha, "Ring configuration modulus");
  database->add_option("--refs", refs_json, "References as JSON, e.g. '[[1,0],[0,1],[-1,0]]'");
  database->add_option("--priors", priors_json, "Priors as JSON list (default: equal)");
  database->add_option("--true", db_true, "Fix the matching reference instead of drawing it from the priors");
  database->add_option("--shots", shots, "Number of shots")->required();
  database->add_option("--seed", seed, "RNG seed")->required();
  database->add_option("--out", out_path, "Output path, '-' for stdout");

  // optimize-t1
  auto* optimize = app.add_subcommand("optimize-t1", "Best first-beamsplitter transmittivity");
  std::optional<double> delta;
  optimize->add_option("--alpha1", alpha1_s, "Reference 1 amplitude 're,im'");
  optimize->add_option("--alpha2", alpha2_s, "Reference 2 amplitude 're,im'");
  optimize->add_option("--delta", delta, "|alpha1 - alpha2| (alternative to --alpha1/--alpha2)");
  optimize->add_option("--eta1", eta1, "Prior of reference 1")->capture_default_str();
  optimize->add_option("--out", out_path, "Output path, '-' for stdout");

  try {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolName << " " << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (curves->parsed()) {
      const auto grid = linear_grid(grid_min, grid_max, grid_steps);
      const auto rows = curve_table(grid);
      std::string payload;
      if (format == "json") {
        json j = report_header("curves", {{"min", grid_min}, {"max", grid_max}, {"steps", grid_steps}});
        json data = json::array();
        for (const auto& r : rows) data.push_back({{"strategy", r.strategy}, {"delta_abs", r.delta_abs}, {"probability", r.probability}});
        j["rows"] = data;
        payload = j.dump(2) + "\n";
      } else {
        std::ostringstream os;
        os << "strategy,delta_abs,probability\n";
        for (const auto& r : rows) os << r.strategy << ',' << format_sig9(r.delta_abs) << ',' << format_sig9(r.probability) << '\n';
        payload = os.str();
      }
      emit(out_path, payload, out);
      return kExitOk;
    }

    if (simulate->parsed()) {
      Ui2Config cfg;
      cfg.alpha1 = parse_amplitude(alpha1_s);
      cfg.alpha2 = parse_amplitude(alpha2_s);
      cfg.t1 = t1;
      cfg.priors = Priors(eta1);
      cfg.fixed_true = true_ref;
      std::vector<OutcomeRecord> records;
      const Ui2Summary s = simulate_ui2(cfg, *shots, *seed, shots_csv.empty() ? nullptr : &records);

      const auto t = ui2_transmittivities(t1);
      const double dist_sq = std::norm(cfg.alpha1 - cfg.alpha2);
      const double p1 = -std::expm1(-t.t3 * dist_sq);
      const double p2 = -std::expm1(-(1.0 - t.t2) * dist_sq);
      double expected = 0.0;
      if (!true_ref) expected = p_bs(cfg.alpha1, cfg.alpha2, t1, cfg.priors);
      else expected = (*true_ref == 1 ? p1 : p2);
      const double n = static_cast<double>(s.shots);
      const double stderr_expected = s.shots ? std::sqrt(expected * (1.0 - expected) / n) : 0.0;

      json config = {{"alpha1", amplitude_json(cfg.alpha1)}, {"alpha2", amplitude_json(cfg.alpha2)},
                     {"t1", t1}, {"eta1", eta1}, {"shots", *shots}, {"seed", *seed}};
      config["true"] = true_ref ? json(*true_ref) : json(nullptr);
      json j = report_header("simulate", config);
      j["transmittivities"] = {{"t1", t.t1}, {"t2", t.t2}, {"t3", t.t3}};
      j["counts"] = {{"identified_1", s.identified_1}, {"identified_2", s.identified_2},
                     {"inconclusive", s.inconclusive}, {"error", s.error}, {"misidentified", s.misidentified}};
      j["p1"] = p1;
      j["p2"] = p2;
      j["expected_success"] = expected;
      j["success_frequency"] = s.success_frequency();
      j["expected_stderr"] = stderr_expected;
      j["z_score"] = stderr_expected > 0 ? (s.success_frequency() - expected) / stderr_expected : 0.0;
      if (!shots_csv.empty()) {
        std::ostringstream os;
        write_shot_csv(os, build_ui2_circuit(t1), records);
        emit(shots_csv, os.str(), out);
      }
      emit(out_path, j.dump(2) + "\n", out);
      return kExitOk;
    }

    if (verify->parsed()) {
      const bool all = !want_fock && !want_qudit;
      json config = {{"fock", want_fock || all}, {"qudit", want_qudit || all}, {"n_max", n_max}, {"d", dim},
                     {"seed", verify_seed}, {"samples", verify_samples}};
      json j = report_header("verify", config);
      json checks = json::array();
      if (want_qudit || all) {
        for (auto& c : qudit_battery(dim, verify_seed, verify_samples)) checks.push_back(c);
      }
      if (want_fock || all) {
        for (auto& c : fock_battery(n_max)) checks.push_back(c);
      }
      const bool pass = std::all_of(checks.begin(), checks.end(), [](const json& c) { return c["pass"].get<bool>(); });
      j["checks"] = checks;
      j["pass"] = pass;
      emit(out_path, j.dump(2) + "\n", out);
      return pass ? kExitOk : kExitCheckFailed;
    }

    if (database->parsed()) {
      DatabaseSpec spec;
      json config = {{"shots", *shots}, {"seed", *seed}};
      if (ring_alpha) {
        if (!db_n) throw UsageError("--ring-alpha needs --n");
        if (!refs_json.empty()) throw UsageError("use either --ring-alpha or --refs");
        spec = ring_spec(*ring_alpha, *db_n);
        config["ring_alpha"] = *ring_alpha;
      } else if (!refs_json.empty()) {
        json refs;
        try {
          refs = json::parse(refs_json);
        } catch (const json::exception& e) {
          throw UsageError(std::string("--refs is not valid JSON: ") + e.what());
        }
        if (!refs.is_array()) throw UsageError("--refs must be a JSON list");
        for (const auto& r : refs) spec.references.push_back(amplitude_from_json(r));
        if (db_n && *db_n != static_cast<int>(spec.references.size())) throw UsageError("--n disagrees with --refs length");
        spec.priors.assign(spec.references.size(), spec.references.empty() ? 0.0 : 1.0 / spec.references.size());
        json echo = json::array();
        for (auto z : spec.references) echo.push_back(amplitude_json(z));
        config["refs"] = echo;
      } else {
        throw UsageError("database needs --ring-alpha with --n, or --refs");
      }
      if (!priors_json.empty()) {
        try {
          spec.priors = json::parse(priors_json).get<std::vector<double>>();
        } catch (const json::exception& e) {
          throw UsageError(std::string("--priors must be a JSON list of numbers: ") + e.what());
        }
        config["priors"] = spec.priors;
      }
      if (db_true) spec.true_index = *db_true;
      config["n"] = spec.n();
      config["true"] = db_true ? json(*db_true) : json(nullptr);
      validate(spec);

      const DatabaseSummary s = simulate_database(spec, *shots, *seed, !db_true);
      json j = report_header("database", config);
      const int n = static_cast<int>(spec.n());
      double p_circuit = success_probability(spec);
      if (db_true) {
        // Conditional on a fixed matching reference.
        DatabaseSpec fixed = spec;
        fixed.priors.assign(spec.n(), 0.0);
        fixed.priors[*db_true - 1] = 1.0;
        p_circuit = success_probability(fixed);
      }
      j["n"] = n;
      j["beamsplitters"] = build_database_circuit(n).ops().size();
      j["p_analytic_circuit"] = p_circuit;
      j["p_paper_constant"] = success_probability_sqrt_constant(spec);
      j["exponent_constant_circuit"] = 1.0 / (n + 1);
      j["exponent_constant_sqrt"] = 1.0 / std::sqrt(static_cast<double>(n - 1));
      j["mc_estimate"] = s.frequency();
      j["mc_stderr"] = s.binomial_stderr();
      j["shots"] = s.shots;
      j["misidentifications"] = s.misidentified;
      j["inconclusive"] = s.inconclusive;
      json dups = json::array();
      for (auto [a, b] : near_duplicate_references(spec)) dups.push_back({a, b});
      if (!dups.empty()) j["warning_near_duplicate_references"] = dups;
      emit(out_path, j.dump(2) + "\n", out);
      return kExitOk;
    }

    if (optimize->parsed()) {
      std::complex<double> a1, a2;
      if (delta) {
        if (!alpha1_s.empty() || !alpha2_s.empty()) throw UsageError("use either --delta or --alpha1/--alpha2");
        a1 = 0.0;
        a2 = *delta;
      } else {
        if (alpha1_s.empty() || alpha2_s.empty()) throw UsageError("optimize-t1 needs --delta or both --alpha1 and --alpha2");
        a1 = parse_amplitude(alpha1_s);
        a2 = parse_amplitude(alpha2_s);
      }
      const Priors priors(eta1);
      const double best = optimize_t1(a1, a2, priors);
      json j = report_header("optimize-t1", {{"alpha1", amplitude_json(a1)}, {"alpha2", amplitude_json(a2)}, {"eta1", eta1}});
      j["t1_star"] = best;
      j["p_bs"] = p_bs(a1, a2, std::clamp(best, 1e-12, 1.0 - 1e-12), priors);
      const auto t = ui2_transmittivities(std::clamp(best, 1e-12, 1.0 - 1e-12));
      j["t2"] = t.t2;
      j["t3"] = t.t3;
      if (priors.is_equal()) j["critical_point_residual"] = critical_point_residual(best, std::abs(a1 - a2));
      emit(out_path, j.dump(2) + "\n", out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace cohui
