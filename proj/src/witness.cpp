// Closed-form witness machinery: coefficient sets, bounds, scenario reports.
#include "spinosc/witness.hpp"

#include <cmath>

#include "spinosc/bathmc.hpp"
#include "spinosc/constants.hpp"
#include "spinosc/errors.hpp"
#include "spinosc/quadform.hpp"

namespace spinosc {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedFormO1: return "closed_form_o1";
    case Provenance::ClosedFormFull: return "closed_form_full";
    case Provenance::NumericOptimum: return "numeric_optimum";
  }
  return "unknown";
}

MomentTable analytic_moments(const ScenarioConfig& c) {
  if (c.scenario == Scenario::Dephasing) {
    throw Error("analytic_moments does not cover the dephasing scenario");
  }
  const bool thermal = c.scenario == Scenario::ThermalInitial ||
                       c.scenario == Scenario::ThermalInitialPlusBath;
  const double K = thermal ? 2.0 * c.nbar + 1.0 : 1.0;
  const double N = c.n_atoms;
  const double x = c.x();
  const double u = 1.0 - std::cos(x);
  const double s = std::sin(x);
  const double l2 = c.lambda * c.lambda;
  const double qf = std::sqrt(1.0 / (2.0 * c.mass * c.omega));
  const double pf = std::sqrt(c.mass * c.omega / 2.0);

  MomentTable t;
  t.jx = 0.5 * N * (1.0 - l2 * K * u);
  t.jy = 0.0;
  t.jz = 0.0;
  t.q = 0.0;
  t.p = 0.0;
  t.jx2 = 0.25 * N * N * (1.0 - 2.0 * l2 * K * u) + 0.5 * l2 * N * K * u;
  t.jy2 = 0.25 * N + 0.5 * (N * N - N) * l2 * K * u;
  t.jz2 = 0.25 * N;
  t.q2 = qf * qf * (K + l2 * N * u * u);
  t.p2 = pf * pf * (K + l2 * N * s * s);
  t.qp = l2 * N * u * s;
  t.q_jx = 0.0;
  t.p_jx = 0.0;
  t.q_jy = K * c.lambda * N * s * qf;
  t.p_jy = -K * c.lambda * N * u * pf;
  t.q_jz = -c.lambda * N * u * qf;
  t.p_jz = -c.lambda * N * s * pf;
  return t;
}

namespace witness {

namespace {

struct Trig {
  double x, u, s, qf, pf;
  explicit Trig(const ScenarioConfig& c)
      : x(c.x()),
        u(1.0 - std::cos(x)),
        s(std::sin(x)),
        qf(std::sqrt(1.0 / (2.0 * c.mass * c.omega))),
        pf(std::sqrt(c.mass * c.omega / 2.0)) {}
};

WitnessReport finalize(WitnessReport r) {
  r.w_diff = r.w_bound - r.w_en;
  r.w_ratio = r.w_bound != 0.0 ? r.w_diff / r.w_bound : 0.0;
  r.violated = r.w_diff > 0.0;
  if (r.violated && r.w_ratio > 0.0) {
    r.n_meas_estimate = 1.0 / (r.w_ratio * r.w_ratio);
  }
  return r;
}

}  // namespace

WitnessCoefficients coefficients_noiseless(const ScenarioConfig& c, CoefficientOrder order) {
  const Trig t(c);
  const double lN = c.lambda * c.n_atoms;
  if (order == CoefficientOrder::FirstOrder) {
    return make_coefficients(-lN * t.pf * t.s, lN * t.qf * t.u, lN * t.pf * t.u,
                             lN * t.qf * t.s, Provenance::ClosedFormO1);
  }
  const double l2N = c.lambda * c.lambda * c.n_atoms;
  const double d1 = 2.0 * (1.0 + l2N * t.u * t.u);
  const double d2 = 2.0 * (1.0 + l2N * t.s * t.s);
  return make_coefficients(-2.0 * t.pf * lN * t.s / d1, 2.0 * t.qf * lN * t.u / d2,
                           2.0 * t.pf * lN * t.u / d1, 2.0 * t.qf * lN * t.s / d2,
                           Provenance::ClosedFormFull);
}

WitnessCoefficients coefficients_thermal(const ScenarioConfig& c) {
  const Trig t(c);
  const double lN = c.lambda * c.n_atoms;
  const double K = 2.0 * c.nbar + 1.0;
  return make_coefficients(-lN * t.pf * t.s, lN * t.qf * t.u, lN * t.pf * t.u / K,
                           lN * t.qf * t.s / K, Provenance::ClosedFormO1);
}

WitnessCoefficients coefficients_dephasing_optimized(const ScenarioConfig& c) {
  const Trig t(c);
  const double cos_x = std::cos(t.x);
  const double fa = (4.0 - c.sigma2 * (1.0 + cos_x)) / 4.0;
  const double fb = (4.0 - c.sigma2 * (1.0 - cos_x)) / 4.0;
  const WitnessCoefficients o1 = coefficients_noiseless(c, CoefficientOrder::FirstOrder);
  return make_coefficients(fa * o1.a_y, fb * o1.b_y, fa * o1.a_z, fb * o1.b_z,
                           Provenance::ClosedFormFull);
}

double witness_bound(const WitnessCoefficients& coeffs, double j_min_exp) {
  return j_min_exp + std::abs(coeffs.cross);
}

double bath_correction(const ScenarioConfig& c, const WitnessCoefficients& coeffs) {
  return bathmc::delta_w_from_covariances(bathmc::covariances_closed_form(c), coeffs,
                                          c.n_atoms);
}

double violation_threshold(const ScenarioConfig& c) {
  if (!c.has_bath()) {
    throw Error("violation_threshold applies to bath scenarios only");
  }
  const Trig t(c);
  if (t.u < 1e-12) {
    throw UnsupportedTime("no violation when omega t is a multiple of 2 pi");
  }
  if (c.scenario == Scenario::ThermalInitialPlusBath) {
    if (std::abs(t.x - constants::pi) > 1e-9) {
      throw UnsupportedTime("thermal bath threshold is defined at omega t = pi");
    }
    const double K = 2.0 * c.nbar + 1.0;
    return constants::pi * (3.0 * K * K + 4.0) / (6.0 * K);
  }
  const double g = (10.0 * t.x - 4.0 * t.x * std::cos(t.x) - 4.0 * t.s -
                    std::sin(2.0 * t.x)) / 4.0;
  return 2.0 * g / (3.0 * t.u);
}

namespace {

WitnessReport closed_form_noiseless(const ScenarioConfig& c) {
  const Trig t(c);
  const double N = c.n_atoms;
  const double l2 = c.lambda * c.lambda;
  WitnessReport r;
  r.coefficients = coefficients_noiseless(c, CoefficientOrder::FirstOrder);
  r.w_bound = witness_bound(r.coefficients, c.j_min());
  r.per_term = {0.5 * l2 * N * t.u, 0.25 * N - 0.5 * l2 * N * t.u,
                0.25 * N - 0.5 * l2 * N * N * t.u};
  r.w_en = 0.5 * N - 0.5 * l2 * N * N * t.u;
  return finalize(r);
}

WitnessReport closed_form_thermal(const ScenarioConfig& c) {
  const Trig t(c);
  const double N = c.n_atoms;
  const double K = 2.0 * c.nbar + 1.0;
  const double l2 = c.lambda * c.lambda;
  WitnessReport r;
  r.coefficients = coefficients_thermal(c);
  r.w_bound = witness_bound(r.coefficients, c.j_min());
  r.per_term = {0.5 * l2 * N * K * t.u, 0.25 * N - 0.5 * l2 * N * K * t.u,
                0.25 * N - 0.5 * l2 * N * N * t.u / K};
  r.w_en = 0.5 * N - 0.5 * l2 * N * N * t.u / K;
  return finalize(r);
}

WitnessReport bath_report(const ScenarioConfig& c, CoefficientChoice choice) {
  const bool thermal = c.scenario == Scenario::ThermalInitialPlusBath;
  const bathmc::BathCovariances cov = bathmc::covariances_closed_form(c);
  if (choice == CoefficientChoice::NumericOptimum) {
    const quadform::QuadraticForm base = quadform::assemble(analytic_moments(c));
    const quadform::QuadraticForm full = quadform::with_bath(base, cov, c.n_atoms);
    const quadform::MinimizeResult opt = quadform::minimize(full);
    WitnessReport r;
    r.coefficients = opt.coefficients;
    r.w_bound = witness_bound(r.coefficients, c.j_min());
    r.w_en = opt.w_min;
    const auto terms = quadform::witness_terms(analytic_moments(c), r.coefficients);
    const auto delta = bathmc::delta_w_terms(cov, r.coefficients, c.n_atoms);
    r.per_term = {terms[0] + delta.term_x, terms[1] + delta.term_y,
                  terms[2] + delta.term_z};
    return finalize(r);
  }
  WitnessReport r = thermal ? closed_form_thermal(c) : closed_form_noiseless(c);
  const auto delta = bathmc::delta_w_terms(cov, r.coefficients, c.n_atoms);
  r.per_term = {r.per_term[0] + delta.term_x, r.per_term[1] + delta.term_y,
                r.per_term[2] + delta.term_z};
  r.w_en += delta.total();
  return finalize(r);
}

}  // namespace

DephasingReport dephasing_report(const ScenarioConfig& c) {
  validate(c);
  const Trig t(c);
  const double N = c.n_atoms;
  const double l2 = c.lambda * c.lambda;
  const double s2 = c.sigma2;
  const double j_eff = c.j_min() * (1.0 - 0.5 * s2);
  const double w_en = 0.5 * N * (1.0 + 0.5 * s2) - 0.5 * l2 * N * N * t.u;
  const std::array<double, 3> per_term = {
      0.25 * N * s2 + 0.5 * l2 * N * t.u * (1.0 - s2),
      0.25 * N - 0.5 * l2 * N * t.u * (1.0 - s2),
      0.25 * N - 0.5 * l2 * N * N * t.u};

  DephasingReport rep;
  {
    WitnessReport r;
    r.coefficients = coefficients_noiseless(c, CoefficientOrder::FirstOrder);
    r.w_bound = j_eff + std::abs(r.coefficients.cross);
    r.w_en = w_en;
    r.per_term = per_term;
    rep.with_noiseless_coefficients = finalize(r);
  }
  {
    WitnessReport r;
    r.coefficients = coefficients_dephasing_optimized(c);
    // The O(sigma^2) closed form of the optimized cross term; the raw coefficient
    // product carries spurious O(sigma^4) pieces.
    r.w_bound = j_eff + l2 * N * N * t.u * (1.0 - 0.5 * s2);
    r.w_en = w_en;
    r.per_term = per_term;
    rep.with_optimized_coefficients = finalize(r);
  }
  rep.lambda_max = std::sqrt((1.0 + 0.5 * s2) / (2.0 * N));
  rep.noiseless_preferred = true;
  return rep;
}

WitnessReport witness_value(const ScenarioConfig& c, CoefficientChoice choice) {
  validate(c);
  switch (c.scenario) {
    case Scenario::Noiseless:
      if (choice == CoefficientChoice::NumericOptimum) {
        const auto opt = quadform::minimize(quadform::assemble(analytic_moments(c)));
        WitnessReport r;
        r.coefficients = opt.coefficients;
        r.w_bound = witness_bound(r.coefficients, c.j_min());
        r.w_en = opt.w_min;
        r.per_term = quadform::witness_terms(analytic_moments(c), r.coefficients);
        return finalize(r);
      }
      return closed_form_noiseless(c);
    case Scenario::ThermalInitial:
      if (choice == CoefficientChoice::NumericOptimum) {
        const auto opt = quadform::minimize(quadform::assemble(analytic_moments(c)));
        WitnessReport r;
        r.coefficients = opt.coefficients;
        r.w_bound = witness_bound(r.coefficients, c.j_min());
        r.w_en = opt.w_min;
        r.per_term = quadform::witness_terms(analytic_moments(c), r.coefficients);
        return finalize(r);
      }
      return closed_form_thermal(c);
    case Scenario::ThermalInitialPlusBath:
    case Scenario::GroundPlusBath:
      return bath_report(c, choice);
    case Scenario::Dephasing:
      if (choice == CoefficientChoice::NumericOptimum) {
        throw Error("numeric optimum is not defined for the dephasing scenario");
      }
      return dephasing_report(c).with_noiseless_coefficients;
  }
  throw Error("unhandled scenario");
}

double spin_variance_sum(const ScenarioConfig& c) {
  const Trig t(c);
  const double N = c.n_atoms;
  const double l2 = c.lambda * c.lambda;
  switch (c.scenario) {
    case Scenario::Noiseless:
    case Scenario::GroundPlusBath:
      return 0.5 * N + 0.5 * l2 * N * N * t.u;
    case Scenario::ThermalInitial:
    case Scenario::ThermalInitialPlusBath: {
      const double K = 2.0 * c.nbar + 1.0;
      return 0.5 * N + 0.5 * l2 * N * N * K * t.u;
    }
    case Scenario::Dephasing:
      return 0.5 * N * (1.0 + 0.5 * c.sigma2) +
             0.5 * l2 * N * N * t.u * (1.0 - c.sigma2);
  }
  throw Error("unhandled scenario");
}

double witness_minus_spin_variances(const ScenarioConfig& c) {
  const Trig t(c);
  const double N = c.n_atoms;
  const double l2 = c.lambda * c.lambda;
  switch (c.scenario) {
    case Scenario::Noiseless:
    case Scenario::GroundPlusBath:
      return -l2 * N * N * t.u;
    case Scenario::ThermalInitial:
    case Scenario::ThermalInitialPlusBath: {
      const double K = 2.0 * c.nbar + 1.0;
      return -l2 * N * N * t.u * (1.0 + K * K) / (2.0 * K);
    }
    case Scenario::Dephasing:
      return -l2 * N * N * t.u * (1.0 - 0.5 * c.sigma2);
  }
  throw Error("unhandled scenario");
}

}  // namespace witness
}  // namespace spinosc
