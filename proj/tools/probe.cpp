// Prints library quantities at full precision for pinning expected values in tests.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "spinosc/bathmc.hpp"
#include "spinosc/config.hpp"
#include "spinosc/constants.hpp"
#include "spinosc/dephasing.hpp"
#include "spinosc/harness.hpp"
#include "spinosc/magnetics.hpp"
#include "spinosc/moments.hpp"
#include "spinosc/oracle.hpp"
#include "spinosc/quadform.hpp"
#include "spinosc/witness.hpp"

using namespace spinosc;

namespace {

void p(const char* name, double v) { std::printf("%-44s %.17g\n", name, v); }

ScenarioConfig base(Scenario sc, double lambda, double n, double x, double nbar = 0.0) {
  ScenarioConfig c;
  c.scenario = sc;
  c.lambda = lambda;
  c.n_atoms = n;
  c.time = x;  // omega = 1
  c.nbar = nbar;
  return c;
}

std::array<double, 17> to_array(const MomentTable& t) {
  return {t.jx,   t.jy,   t.jz,   t.q,    t.p,    t.jx2, t.jy2, t.jz2, t.q2,
          t.p2,   t.qp,   t.q_jx, t.q_jy, t.q_jz, t.p_jx, t.p_jy, t.p_jz};
}

const char* kEntryNames[17] = {"jx",   "jy",   "jz",   "q",    "p",    "jx2",
                               "jy2",  "jz2",  "q2",   "p2",   "qp",   "q_jx",
                               "q_jy", "q_jz", "p_jx", "p_jy", "p_jz"};

double table_max_diff(const MomentTable& a, const MomentTable& b) {
  const auto xa = to_array(a), xb = to_array(b);
  double worst = 0.0;
  for (int i = 0; i < 17; ++i) worst = std::max(worst, std::abs(xa[i] - xb[i]));
  return worst;
}

double w_en_at(const MomentTable& m, const WitnessCoefficients& c) {
  const auto t = quadform::witness_terms(m, c);
  return t[0] + t[1] + t[2];
}

void run_moments() {
  const double xs[] = {0.5, 1.5, constants::pi};
  double worst_scaled = 0.0;
  for (double n : {2.0, 4.0, 6.0, 8.0}) {
    for (double l : {0.005, 0.01, 0.02}) {
      for (double x : xs) {
        auto c = base(Scenario::Noiseless, l, n, x);
        oracle::HilbertSpec spec;
        spec.n_atoms = static_cast<int>(n);
        const MomentTable exact = oracle::moments(oracle::evolve(c, spec));
        const MomentTable approx = analytic_moments(c);
        const double scaled = table_max_diff(exact, approx) / (l * l * l * n * n * n);
        worst_scaled = std::max(worst_scaled, scaled);
      }
    }
  }
  p("noiseless max |oracle-analytic| / (l^3 N^3)", worst_scaled);

  worst_scaled = 0.0;
  for (double nbar : {1.0, 3.0, 5.0}) {
    for (double l : {0.005, 0.01, 0.02}) {
      auto c = base(Scenario::ThermalInitial, l, 4.0, 1.5, nbar);
      oracle::HilbertSpec spec;
      spec.n_atoms = 4;
      const MomentTable exact = oracle::thermal_moments(c, spec);
      const MomentTable approx = analytic_moments(c);
      const double scaled = table_max_diff(exact, approx) /
                            (l * l * l * 64.0 * (2.0 * nbar + 1.0));
      worst_scaled = std::max(worst_scaled, scaled);
    }
  }
  p("thermal  max |oracle-analytic| / (l^3 N^3 K)", worst_scaled);

  // A full frozen table at one reference point.
  auto c = base(Scenario::Noiseless, 0.02, 4.0, 1.5);
  oracle::HilbertSpec spec;
  spec.n_atoms = 4;
  const auto st = oracle::evolve(c, spec);
  std::printf("reference point N=4 lambda=0.02 x=1.5 fock_dim=%d tail=%.3e\n",
              st.fock_dim, st.tail);
  const auto tab = to_array(oracle::moments(st));
  for (int i = 0; i < 17; ++i) p(kEntryNames[i], tab[i]);

  const auto dense = oracle::evolve_dense(c, spec);
  p("dual-path overlap deficit", 1.0 - oracle::state_overlap(st, dense));

  auto ct = base(Scenario::ThermalInitial, 0.0123, 1.0, 0.0, 3.0);
  ct.mass = 1.0;
  oracle::HilbertSpec spec1;
  spec1.n_atoms = 1;
  p("thermal t=0 nbar=3 q2 (expect 3.5)",
    oracle::thermal_moments(ct, spec1).q2);
}

void run_slope() {
  // Residual of the closed-form W_en against the exact value, halving lambda.
  const double xs[] = {0.5, 1.5, constants::pi};
  double worst = 4.0, best = 0.0, sum = 0.0;
  int count = 0;
  for (double n : {2.0, 4.0, 6.0, 8.0}) {
    for (double l0 : {0.005, 0.01, 0.02}) {
      for (double x : xs) {
        double resid[2];
        for (int k = 0; k < 2; ++k) {
          const double l = l0 / (k ? 2.0 : 1.0);
          auto c = base(Scenario::Noiseless, l, n, x);
          oracle::HilbertSpec spec;
          spec.n_atoms = static_cast<int>(n);
          const auto coeffs = witness::coefficients_noiseless(
              c, witness::CoefficientOrder::FirstOrder);
          const double exact = w_en_at(oracle::moments(oracle::evolve(c, spec)), coeffs);
          const double u = 1.0 - std::cos(x);
          const double closed = 0.5 * n - 0.5 * l * l * n * n * u;
          resid[k] = std::abs(exact - closed);
        }
        const double slope = std::log2(resid[0] / resid[1]);
        std::printf("N=%g l=%g x=%g  resid=%.3e slope=%.4f\n", n, l0, x, resid[0],
                    slope);
        worst = std::min(worst, slope);
        best = std::max(best, slope);
        sum += slope;
        ++count;
      }
    }
  }
  p("slope min", worst);
  p("slope max", best);
  p("slope mean", sum / count);
}

void run_coeffs() {
  // Numeric minimizer against the thermal closed forms over the acceptance grid.
  double worst = 0.0;
  const double xs[] = {0.5, 1.5, constants::pi, 0.25, 2.8};
  for (double n : {2.0, 4.0, 8.0}) {
    for (double l : {0.005, 0.02}) {
      for (double nbar : {0.0, 3.0}) {
        for (double x : xs) {
          auto c = base(nbar > 0 ? Scenario::ThermalInitial : Scenario::Noiseless, l, n,
                        x, nbar);
          const auto form = quadform::assemble(analytic_moments(c));
          const auto res = quadform::minimize(form);
          const auto closed = nbar > 0 ? witness::coefficients_thermal(c)
                                       : witness::coefficients_noiseless(
                                             c, witness::CoefficientOrder::FirstOrder);
          const double d = std::max(
              std::max(std::abs(res.coefficients.a_y - closed.a_y),
                       std::abs(res.coefficients.b_y - closed.b_y)),
              std::max(std::abs(res.coefficients.a_z - closed.a_z),
                       std::abs(res.coefficients.b_z - closed.b_z)));
          worst = std::max(worst, d / (l * l * l * n));
        }
      }
    }
  }
  p("minimizer vs closed coeffs, max / (l^3 N)", worst);

  // The verification-suite point, raw.
  auto c = base(Scenario::ThermalInitial, 0.02, 4.0, 1.5, 3.0);
  const auto res = quadform::minimize(quadform::assemble(analytic_moments(c)));
  const auto closed = witness::coefficients_thermal(c);
  p("coeff diff a_y at N=4 l=0.02 nbar=3", std::abs(res.coefficients.a_y - closed.a_y));
  p("coeff diff b_y", std::abs(res.coefficients.b_y - closed.b_y));
  p("coeff diff a_z", std::abs(res.coefficients.a_z - closed.a_z));
  p("coeff diff b_z", std::abs(res.coefficients.b_z - closed.b_z));
  p("w_min vs closed w_en",
    std::abs(res.w_min - (2.0 - 0.5 * 0.02 * 0.02 * 16.0 * (1.0 - std::cos(1.5)) / 7.0)));
}

void run_magnetics() {
  const auto t1 = magnetics::coupling_g(magnetics::quad_reference_geometry());
  p("quad_reference g_rate", t1.g_rate);
  p("quad_reference lambda", t1.lambda);
  p("quad_reference lambda_n", t1.lambda_n);
  p("quad_reference theta_zpf", t1.theta_zpf);
  p("quad_reference cross_term_ratio", t1.cross_term_ratio);

  const auto lin = magnetics::coupling_g(magnetics::simplified_linear_geometry());
  p("linear g_rate", lin.g_rate);
  p("linear lambda", lin.lambda);
  p("linear lambda_n", lin.lambda_n);
  p("linear theta_zpf", lin.theta_zpf);
  p("linear cross_term_ratio", lin.cross_term_ratio);

  p("exp b_ext (expect 2)",
    magnetics::scaling_exponent(magnetics::quad_reference_geometry(), magnetics::ScalingFactor::BExt));
  p("exp chi   (expect 1)",
    magnetics::scaling_exponent(magnetics::quad_reference_geometry(), magnetics::ScalingFactor::Chi));
  p("exp rho   (expect -0.5)",
    magnetics::scaling_exponent(magnetics::quad_reference_geometry(), magnetics::ScalingFactor::Rho));
  p("exp alpha quad (expect -3.5)",
    magnetics::scaling_exponent(magnetics::quad_reference_geometry(), magnetics::ScalingFactor::Alpha));
  p("exp b_ext linear (expect 1)",
    magnetics::scaling_exponent(magnetics::simplified_linear_geometry(),
                                magnetics::ScalingFactor::BExt));
  p("exp alpha linear (expect -2.5)",
    magnetics::scaling_exponent(magnetics::simplified_linear_geometry(),
                                magnetics::ScalingFactor::Alpha));

  const auto trace = magnetics::phase_trace(magnetics::quad_reference_geometry(),
                                            2.0 * constants::pi / 180.0, 2000, 20.0);
  p("trace final phi", trace.back().phi);
  double maxphi = 0.0;
  for (const auto& pt : trace) maxphi = std::max(maxphi, std::abs(pt.phi));
  p("trace max |phi|", maxphi);
}

void run_magdebug() {
  const auto g = magnetics::quad_reference_geometry();
  for (double h : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 1e-5, 1e-6}) {
    const double fp = magnetics::arm_frequency_difference(g, h);
    const double fm = magnetics::arm_frequency_difference(g, -h);
    std::printf("h=%9.1e f(+h)=%+.10e f(-h)=%+.10e central=%+.10e\n", h, fp, fm,
                (fp - fm) / (2.0 * h));
  }
  p("f(0)", magnetics::arm_frequency_difference(g, 0.0));
  const auto atoms = magnetics::atom_arm_positions(g);
  std::printf("atom1 %.6e %.6e %.6e\n", atoms[0][0], atoms[0][1], atoms[0][2]);
  std::printf("atom2 %.6e %.6e %.6e\n", atoms[1][0], atoms[1][1], atoms[1][2]);
  const auto poses = magnetics::cylinder_poses(g, 0.0);
  for (const auto& cp : poses) {
    std::printf("cyl center %.6e %.6e %.6e R=%.3e hl=%.3e\n", cp.center[0],
                cp.center[1], cp.center[2], cp.radius, cp.half_length);
  }
  const auto b1 = magnetics::total_field(atoms[0], g, 0.0);
  std::printf("B(atom1) %.10e %.10e %.10e\n", b1[0], b1[1], b1[2]);
}

void run_bath() {
  for (double nbar : {0.0, 1.0, 10.0, 100.0}) {
    auto c = base(Scenario::ThermalInitialPlusBath, 0.001, 100.0, constants::pi, nbar);
    c.q_factor = 1e9;
    p(("threshold thermal nbar=" + std::to_string(nbar)).c_str(),
      witness::violation_threshold(c));
  }
  for (double x : {constants::pi / 2.0, constants::pi, 1.5 * constants::pi}) {
    auto c = base(Scenario::GroundPlusBath, 0.001, 100.0, x, 0.0);
    c.q_factor = 1e9;
    p(("threshold ground x=" + std::to_string(x)).c_str(),
      witness::violation_threshold(c));
  }

  // Ratio ordering at omega t = pi.
  const double nbar = 325.0;
  auto noiseless = base(Scenario::Noiseless, 1e-4, 1e6, constants::pi);
  p("w_ratio noiseless", witness::witness_value(noiseless).w_ratio);
  for (double rho : {0.1, 0.25}) {
    auto ct = base(Scenario::ThermalInitialPlusBath, 1e-4, 1e6, constants::pi, nbar);
    ct.q_factor = nbar / rho;
    p(("w_ratio thermal+bath rho=" + std::to_string(rho)).c_str(),
      witness::witness_value(ct).w_ratio);
    auto cg = base(Scenario::GroundPlusBath, 1e-4, 1e6, constants::pi, nbar);
    cg.q_factor = nbar / rho;
    p(("w_ratio ground+bath  rho=" + std::to_string(rho)).c_str(),
      witness::witness_value(cg).w_ratio);
  }
  {
    auto ct = base(Scenario::ThermalInitialPlusBath, 1e-4, 1e6, constants::pi, nbar);
    ct.q_factor = nbar / 1e-4;
    auto cg = base(Scenario::GroundPlusBath, 1e-4, 1e6, constants::pi, nbar);
    cg.q_factor = nbar / 1e-4;
    const double rg = witness::witness_value(cg).w_ratio;
    const double rt = witness::witness_value(ct).w_ratio;
    p("ground/thermal w_ratio ratio at rho=1e-4", rg / rt);
    p("K for comparison", 2.0 * nbar + 1.0);
  }

  // Covariance scale references on the acceptance grid.
  for (auto which : {bathmc::Cov::XiXi, bathmc::Cov::XiQ, bathmc::Cov::XiP,
                     bathmc::Cov::QQ, bathmc::Cov::PP, bathmc::Cov::QP}) {
    double scale = 0.0;
    for (double x : {constants::pi / 4.0, constants::pi / 2.0, constants::pi,
                     1.5 * constants::pi}) {
      for (double l : {0.05, 0.25}) {
        auto c = base(Scenario::GroundPlusBath, l, 2.0, x, 1.0);
        c.q_factor = 10.0;
        scale = std::max(scale, std::abs(bathmc::covariance_closed_form(which, c)));
      }
    }
    std::printf("cov kind %d scale_ref %.17g\n", static_cast<int>(which), scale);
  }

  // One MC spot check.
  auto c = base(Scenario::GroundPlusBath, 0.25, 2.0, constants::pi, 1.0);
  c.q_factor = 10.0;
  const auto est = bathmc::covariance_monte_carlo(bathmc::Cov::XiQ, c, 2000, 7);
  p("MC XiQ mean", est.mean);
  p("MC XiQ se", est.std_err);
  p("closed XiQ", bathmc::covariance_closed_form(bathmc::Cov::XiQ, c));
}

void run_dephasing() {
  auto c = base(Scenario::Dephasing, 3e-4, 1e6, constants::pi);
  c.sigma2 = 20.0 / 600.0;
  p("lambda_max at N=1e6 s2=1/30", witness::dephasing_report(c).lambda_max);

  auto c6 = base(Scenario::Dephasing, 0.02, 6.0, 1.5);
  c6.sigma2 = 0.03;
  const auto avg = dephasing::dephase_average(c6, 20000, 11);
  const auto rep = witness::dephasing_report(c6);
  const double w_mc = w_en_at(avg.mean, rep.with_noiseless_coefficients.coefficients);
  p("dephasing MC W_en (N=6)", w_mc);
  p("closed-form W_en,sigma", rep.with_noiseless_coefficients.w_en);

  // Estimator vs brute force, one offset draw.
  auto c3 = base(Scenario::Dephasing, 0.05, 3.0, 2.2);
  c3.sigma2 = 0.05;
  const std::vector<double> alpha = {0.11, -0.23, 0.31};
  const auto fast = dephasing::sample_moments(c3, alpha);
  const auto brute = dephasing::brute_force_moments(c3, alpha, 40);
  p("estimator vs brute force max diff", table_max_diff(fast, brute));
  const auto fast0 = dephasing::sample_moments(c3, alpha, false);
  const auto brute0 = dephasing::brute_force_moments(c3, alpha, 40, false);
  p("same without squeezing", table_max_diff(fast0, brute0));
}

void run_harness() {
  auto fig2 = base(Scenario::Noiseless, std::pow(10.0, -4.5), 1e6, constants::pi);
  const auto rep = witness::witness_value(fig2);
  p("fig2 w_diff", rep.w_diff);
  p("fig2 w_bound", rep.w_bound);
  p("fig2 n_meas scaling", harness::n_meas_scaling(rep));

  auto c6 = base(Scenario::Noiseless, 0.02, 6.0, constants::pi);
  const auto coeffs =
      witness::coefficients_noiseless(c6, witness::CoefficientOrder::FirstOrder);
  const auto budget = harness::n_meas_simulated(c6, coeffs, 2.0, 5, 200);
  p("N=6 n_required", double(budget.n_required));
  p("N=6 n_required_optimal", double(budget.n_required_optimal));
  p("N=6 coverage", budget.coverage);
  p("N=6 normal target", budget.normal_theory_target);
  p("N=6 w_diff (models)", budget.w_diff);
  const double u = 2.0;
  p("N=6 w_diff closed form", 1.5 * 0.02 * 0.02 * 36.0 * u);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string what = argc > 1 ? argv[1] : "all";
  const bool all = what == "all";
  try {
    if (all || what == "moments") run_moments();
    if (all || what == "slope") run_slope();
    if (all || what == "coeffs") run_coeffs();
    if (all || what == "magnetics") run_magnetics();
    if (all || what == "bath") run_bath();
    if (all || what == "dephasing") run_dephasing();
    if (all || what == "harness") run_harness();
    if (what == "magdebug") run_magdebug();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "probe failed: %s\n", e.what());
    return 1;
  }
  return 0;
}
