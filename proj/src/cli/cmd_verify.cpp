// verify subcommand: cross-module property suites with measured residuals.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "spinosc/bathmc.hpp"
#include "spinosc/config.hpp"
#include "spinosc/constants.hpp"
#include "spinosc/dephasing.hpp"
#include "spinosc/errors.hpp"
#include "spinosc/moments.hpp"
#include "spinosc/oracle.hpp"
#include "spinosc/quadform.hpp"
#include "spinosc/separable.hpp"
#include "spinosc/witness.hpp"

namespace spinosc::cli {

namespace {

struct Property {
  std::string name;
  std::string status;  // pass | fail | underpowered
  double residual{};
  double tolerance{};
  double se{};
};

Property deterministic(const std::string& name, double residual, double tolerance) {
  Property p;
  p.name = name;
  p.status = residual <= tolerance ? "pass" : "fail";
  p.residual = residual;
  p.tolerance = tolerance;
  return p;
}

// Monte Carlo gate: agreement within 3 SE, demoted to underpowered when the SE is too
// large a fraction of the reference scale to be informative.
Property stochastic(const std::string& name, double residual, double se, double scale) {
  Property p;
  p.name = name;
  p.residual = residual;
  p.tolerance = 3.0 * se;
  p.se = se;
  if (se > 0.1 * scale) {
    p.status = "underpowered";
  } else {
    p.status = residual <= p.tolerance ? "pass" : "fail";
  }
  return p;
}

double w_en_at(const MomentTable& m, const WitnessCoefficients& c) {
  const auto t = quadform::witness_terms(m, c);
  return t[0] + t[1] + t[2];
}

ScenarioConfig make_config(Scenario sc, double lambda, double n, double x,
                           double nbar = 0.0) {
  ScenarioConfig c;
  c.scenario = sc;
  c.lambda = lambda;
  c.n_atoms = n;
  c.time = x;
  c.nbar = nbar;
  return c;
}

void suite_closedform(std::vector<Property>& props) {
  // Residual envelopes: the closed forms drop O(lambda^3 N^3) terms, with an extra
  // measured safety factor of 2.
  const double lam = 0.02, x = 1.5, u = 1.0 - std::cos(x);
  const double env = 2.0 * lam * lam * lam;

  {
    const double n = 4.0;
    auto c = make_config(Scenario::Noiseless, lam, n, x);
    oracle::HilbertSpec spec;
    spec.n_atoms = 4;
    const auto coeffs =
        witness::coefficients_noiseless(c, witness::CoefficientOrder::FirstOrder);
    const double exact = w_en_at(oracle::moments(oracle::evolve(c, spec)), coeffs);
    const double closed = 0.5 * n - 0.5 * lam * lam * n * n * u;
    props.push_back(deterministic("closedform.noiseless_w_en_vs_oracle",
                                  std::abs(exact - closed), env * n * n * n));

    const auto st = oracle::evolve(c, spec);
    const auto m = oracle::moments(st);
    const double sum_rule =
        std::abs(m.jx2 + m.jy2 + m.jz2 - 0.5 * n * (0.5 * n + 1.0));
    props.push_back(deterministic("closedform.spin_sum_rule", sum_rule, 1e-10));

    const double overlap_gap =
        1.0 - oracle::state_overlap(st, oracle::evolve_dense(c, spec));
    props.push_back(
        deterministic("closedform.propagator_dual_path", overlap_gap, 1e-10));
  }

  {
    const double n = 4.0, nbar = 3.0, kk = 2.0 * nbar + 1.0;
    auto c = make_config(Scenario::ThermalInitial, lam, n, x, nbar);
    oracle::HilbertSpec spec;
    spec.n_atoms = 4;
    const auto coeffs = witness::coefficients_thermal(c);
    const double exact = w_en_at(oracle::thermal_moments(c, spec), coeffs);
    const double closed = 0.5 * n - 0.5 * lam * lam * n * n * u / kk;
    props.push_back(deterministic("closedform.thermal_w_en_vs_oracle",
                                  std::abs(exact - closed), env * n * n * n * kk));

    const auto res = quadform::minimize(quadform::assemble(analytic_moments(c)));
    const double coeff_diff = std::max(
        std::max(std::abs(res.coefficients.a_y - coeffs.a_y),
                 std::abs(res.coefficients.b_y - coeffs.b_y)),
        std::max(std::abs(res.coefficients.a_z - coeffs.a_z),
                 std::abs(res.coefficients.b_z - coeffs.b_z)));
    props.push_back(deterministic("closedform.minimizer_vs_closed_coefficients",
                                  coeff_diff, env * n));

    const auto form = quadform::assemble(analytic_moments(c));
    const double route_gap = std::abs(form.value(coeffs) - w_en_at(analytic_moments(c), coeffs));
    props.push_back(
        deterministic("closedform.quadratic_form_matches_direct_sum", route_gap, 1e-12));
  }

  {
    auto c = make_config(Scenario::GroundPlusBath, 1e-3, 100.0, constants::pi);
    c.q_factor = 1e9;
    const double thr = witness::violation_threshold(c);
    props.push_back(deterministic("closedform.ground_threshold_at_pi",
                                  std::abs(thr - 7.0 * constants::pi / 6.0), 1e-12));
  }
}

void suite_bath(std::vector<Property>& props, std::uint64_t seed, int n_real) {
  if (n_real <= 0) n_real = 4000;
  auto c = make_config(Scenario::GroundPlusBath, 0.05, 2.0, constants::pi, 1.0);
  c.q_factor = 10.0;

  const auto closed = bathmc::covariances_closed_form(c);
  const double scale =
      std::max({std::abs(closed.xixi), std::abs(closed.xiq), std::abs(closed.xip),
                std::abs(closed.qq), std::abs(closed.pp), std::abs(closed.qp)});

  const struct {
    bathmc::Cov which;
    const char* name;
    double value;
  } kinds[] = {
      {bathmc::Cov::XiXi, "bath.cov_xixi", closed.xixi},
      {bathmc::Cov::XiQ, "bath.cov_xiq", closed.xiq},
      {bathmc::Cov::XiP, "bath.cov_xip", closed.xip},
      {bathmc::Cov::QQ, "bath.cov_qq", closed.qq},
      {bathmc::Cov::PP, "bath.cov_pp", closed.pp},
      {bathmc::Cov::QP, "bath.cov_qp", closed.qp},
  };
  for (const auto& k : kinds) {
    const auto est = bathmc::covariance_monte_carlo(k.which, c, n_real, seed);
    props.push_back(
        stochastic(k.name, std::abs(est.mean - k.value), est.std_err, scale));
  }

  const auto coeffs = witness::coefficients_thermal(c);
  const auto est = bathmc::delta_w_monte_carlo(c, coeffs, n_real, seed + 1);
  const double dw = bathmc::delta_w_from_covariances(closed, coeffs, c.n_atoms);
  props.push_back(stochastic("bath.delta_w_assembly", std::abs(est.mean - dw),
                             est.std_err, std::max(std::abs(dw), scale)));
}

void suite_dephasing(std::vector<Property>& props, std::uint64_t seed, int n_samples) {
  if (n_samples <= 0) n_samples = 10000;
  const int batches = 10;
  const int per_batch = std::max(2, n_samples / batches);

  for (double s2 : {0.01, 0.03}) {
    auto c = make_config(Scenario::Dephasing, 0.02, 6.0, 1.5);
    c.sigma2 = s2;
    const auto rep = witness::dephasing_report(c);
    const auto& coeffs = rep.with_noiseless_coefficients.coefficients;
    const double closed = rep.with_noiseless_coefficients.w_en;

    double mean = 0.0, m2 = 0.0;
    for (int b = 0; b < batches; ++b) {
      const auto avg = dephasing::dephase_average(c, per_batch, seed + 1000 * b + 17);
      const double w = w_en_at(avg.mean, coeffs);
      const double d = w - mean;
      mean += d / (b + 1);
      m2 += d * (w - mean);
    }
    const double se = std::sqrt(m2 / (batches - 1.0) / batches);
    props.push_back(stochastic("dephasing.w_en_sigma2_" + std::to_string(s2),
                               std::abs(mean - closed), se, std::abs(closed)));
  }

  {
    auto c = make_config(Scenario::Dephasing, 0.05, 3.0, 2.2);
    c.sigma2 = 0.05;
    const std::vector<double> alpha = {0.11, -0.23, 0.31};
    const auto fast = dephasing::sample_moments(c, alpha);
    const auto brute = dephasing::brute_force_moments(c, alpha, 40);
    double worst = 0.0;
    const auto diff = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
    diff(fast.jx, brute.jx);
    diff(fast.jy, brute.jy);
    diff(fast.jx2, brute.jx2);
    diff(fast.jy2, brute.jy2);
    diff(fast.q2, brute.q2);
    diff(fast.p2, brute.p2);
    diff(fast.qp, brute.qp);
    diff(fast.q_jx, brute.q_jx);
    diff(fast.q_jy, brute.q_jy);
    diff(fast.q_jz, brute.q_jz);
    diff(fast.p_jx, brute.p_jx);
    diff(fast.p_jy, brute.p_jy);
    diff(fast.p_jz, brute.p_jz);
    props.push_back(
        deterministic("dephasing.estimator_vs_brute_force", worst, 1e-10));
  }
}

void suite_separable(std::vector<Property>& props, std::uint64_t seed, int n_states) {
  if (n_states <= 0) n_states = 200;
  const int n_coeff_draws = 50;
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> coeff_draw(-2.0, 2.0);
  std::uniform_int_distribution<int> atoms_draw(1, 4);

  double worst_violation = 0.0;  // max over draws of bound - W (positive = violation)
  double worst_floor = 0.0;      // max of j - sum Var(J)
  for (int i = 0; i < n_states; ++i) {
    const int n_atoms = atoms_draw(eng);
    const auto state = separable::sample_state(n_atoms, 20, eng);
    const auto& t = state.table;
    worst_floor = std::max(
        worst_floor, state.j - (t.var_jx() + t.var_jy() + t.var_jz()));
    for (int k = 0; k < n_coeff_draws; ++k) {
      const auto coeffs =
          make_coefficients(coeff_draw(eng), coeff_draw(eng), coeff_draw(eng),
                            coeff_draw(eng), Provenance::NumericOptimum);
      const double bound = quadform::hofmann_bound(coeffs, state.j);
      const double w = separable::witness_at(t, coeffs);
      worst_violation = std::max(worst_violation, bound - w);
    }
  }
  props.push_back(
      deterministic("separable.bound_never_violated", worst_violation, 1e-9));
  props.push_back(
      deterministic("separable.spin_variance_floor", worst_floor, 1e-9));
}

}  // namespace

int run_verify(const VerifyOptions& opt) {
  std::vector<Property> props;
  const bool all = opt.suite == "all";
  if (all || opt.suite == "closedform") suite_closedform(props);
  if (all || opt.suite == "bath") suite_bath(props, opt.seed, opt.n_real);
  if (all || opt.suite == "dephasing") suite_dephasing(props, opt.seed, opt.n_real);
  if (all || opt.suite == "separable") suite_separable(props, opt.seed, opt.n_real);

  nlohmann::json out;
  out["suite"] = opt.suite;
  out["seed"] = opt.seed;
  out["properties"] = nlohmann::json::array();
  bool failed = false;
  for (const auto& p : props) {
    nlohmann::json jp;
    jp["name"] = p.name;
    jp["status"] = p.status;
    jp["residual"] = p.residual;
    jp["tolerance"] = p.tolerance;
    jp["se"] = p.se;
    out["properties"].push_back(jp);
    failed = failed || p.status == "fail";
  }

  const std::string text = out.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw ConfigParseError("cannot open output file: " + opt.out);
    f << text;
  }
  return failed ? kExitVerification : kExitOk;
}

}  // namespace spinosc::cli
