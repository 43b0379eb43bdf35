// Witness quadratic form assembly, bath augmentation, and exact minimization.
#include "spinosc/quadform.hpp"

#include <cmath>

#include "spinosc/errors.hpp"

namespace spinosc::quadform {

QuadraticForm assemble(const MomentTable& m) {
  QuadraticForm f;
  f.constant = m.var_jx() + m.var_jy() + m.var_jz();
  f.linear << 2.0 * m.cov_q_jy(), 2.0 * m.cov_p_jy(), 2.0 * m.cov_q_jz(),
      2.0 * m.cov_p_jz();
  Eigen::Matrix2d block;
  block << m.var_q(), m.cov_qp(), m.cov_qp(), m.var_p();
  f.hessian.block<2, 2>(0, 0) = block;
  f.hessian.block<2, 2>(2, 2) = block;
  return f;
}

std::array<double, 3> witness_terms(const MomentTable& m, const WitnessCoefficients& c) {
  auto term = [&](double a, double b, double var_j, double cov_qj, double cov_pj) {
    return var_j + a * a * m.var_q() + b * b * m.var_p() + 2.0 * a * cov_qj +
           2.0 * b * cov_pj + 2.0 * a * b * m.cov_qp();
  };
  return {m.var_jx(), term(c.a_y, c.b_y, m.var_jy(), m.cov_q_jy(), m.cov_p_jy()),
          term(c.a_z, c.b_z, m.var_jz(), m.cov_q_jz(), m.cov_p_jz())};
}

QuadraticForm with_bath(const QuadraticForm& f, const bathmc::BathCovariances& cov,
                        double n_atoms) {
  QuadraticForm g = f;
  g.constant += 0.25 * n_atoms * n_atoms * cov.xixi;
  g.linear(0) += -n_atoms * cov.xiq;
  g.linear(1) += -n_atoms * cov.xip;
  for (int base : {0, 2}) {
    g.hessian(base, base) += cov.qq;
    g.hessian(base + 1, base + 1) += cov.pp;
    g.hessian(base, base + 1) += cov.qp;
    g.hessian(base + 1, base) += cov.qp;
  }
  return g;
}

MinimizeResult minimize(const QuadraticForm& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(f.hessian);
  const Eigen::Vector4d vals = eig.eigenvalues();
  const double scale = vals.cwiseAbs().maxCoeff();
  if (vals.minCoeff() < -1e-10 * std::max(scale, 1e-300)) {
    throw IndefiniteForm("hessian has a negative eigenvalue; the form has no minimum");
  }
  const double cutoff = 1e-12 * std::max(scale, 0.0);
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d v = eig.eigenvectors().col(i);
    const double proj = v.dot(f.linear);
    if (vals(i) > cutoff) {
      x -= 0.5 * (proj / vals(i)) * v;
    } else if (std::abs(proj) > 1e-12 * (1.0 + f.linear.norm())) {
      throw IndefiniteForm("linear term along a flat hessian direction; unbounded below");
    }
  }
  MinimizeResult r;
  r.coefficients = make_coefficients(x(0), x(1), x(2), x(3), Provenance::NumericOptimum);
  r.w_min = f.value(x);
  return r;
}

double hofmann_bound(const WitnessCoefficients& c, double j_min_exp) {
  return j_min_exp + std::abs(c.a_y * c.b_z - c.a_z * c.b_y);
}

}  // namespace spinosc::quadform
