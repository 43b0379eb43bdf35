// Random separable (product and mixed) spin-oscillator states for bound checks.
#include "spinosc/separable.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinosc/errors.hpp"
#include "spinosc/oracle.hpp"
#include "spinosc/quadform.hpp"

namespace spinosc::separable {

namespace {

using cd = std::complex<double>;

Eigen::VectorXcd random_unit_vector(int dim, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd{gauss(eng), gauss(eng)};
  const double nrm = v.norm();
  if (nrm < 1e-12) return random_unit_vector(dim, eng);
  return v / nrm;
}

double real_expect(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& op) {
  const cd val = v.dot(op * v);
  if (std::abs(val.imag()) > 1e-10 * (1.0 + std::abs(val.real()))) {
    throw Error("expectation of a hermitian operator acquired an imaginary part");
  }
  return val.real();
}

}  // namespace

SeparableState sample_state(int n_atoms, int fock_dim, std::mt19937_64& eng) {
  if (n_atoms < 1 || fock_dim < 2) {
    throw Error("separable sampling needs n_atoms >= 1 and fock_dim >= 2");
  }
  const Eigen::MatrixXcd jx = oracle::spin_matrix(n_atoms, 0);
  const Eigen::MatrixXcd jy = oracle::spin_matrix(n_atoms, 1);
  const Eigen::MatrixXcd jz = oracle::spin_matrix(n_atoms, 2);

  Eigen::MatrixXcd low = Eigen::MatrixXcd::Zero(fock_dim, fock_dim);
  for (int q = 1; q < fock_dim; ++q) low(q - 1, q) = std::sqrt(double(q));
  const double qf = std::sqrt(0.5);  // m = omega = 1 units
  const Eigen::MatrixXcd qop = qf * (low + low.adjoint());
  const Eigen::MatrixXcd pop = cd{0.0, 1.0} * qf * (low.adjoint() - low);

  std::uniform_int_distribution<int> n_terms_dist(1, 3);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const int n_terms = n_terms_dist(eng);
  std::vector<double> w(n_terms);
  double wsum = 0.0;
  for (double& wi : w) {
    wi = unif(eng);
    wsum += wi;
  }

  MomentTable t;
  for (int term = 0; term < n_terms; ++term) {
    const double wt = w[term] / wsum;
    const Eigen::VectorXcd spin = random_unit_vector(n_atoms + 1, eng);
    const Eigen::VectorXcd osc = random_unit_vector(fock_dim, eng);

    const double mjx = real_expect(spin, jx);
    const double mjy = real_expect(spin, jy);
    const double mjz = real_expect(spin, jz);
    const double mq = real_expect(osc, qop);
    const double mp = real_expect(osc, pop);

    t.jx += wt * mjx;
    t.jy += wt * mjy;
    t.jz += wt * mjz;
    t.q += wt * mq;
    t.p += wt * mp;
    t.jx2 += wt * real_expect(spin, jx * jx);
    t.jy2 += wt * real_expect(spin, jy * jy);
    t.jz2 += wt * real_expect(spin, jz * jz);
    t.q2 += wt * real_expect(osc, qop * qop);
    t.p2 += wt * real_expect(osc, pop * pop);
    t.qp += wt * real_expect(osc, qop * pop + pop * qop);
    // Product states factorize every cross moment.
    t.q_jx += wt * 2.0 * mq * mjx;
    t.q_jy += wt * 2.0 * mq * mjy;
    t.q_jz += wt * 2.0 * mq * mjz;
    t.p_jx += wt * 2.0 * mp * mjx;
    t.p_jy += wt * 2.0 * mp * mjy;
    t.p_jz += wt * 2.0 * mp * mjz;
  }

  SeparableState out;
  out.table = t;
  out.j = 0.5 * n_atoms;
  return out;
}

double witness_at(const MomentTable& table, const WitnessCoefficients& coeffs) {
  const auto terms = quadform::witness_terms(table, coeffs);
  return terms[0] + terms[1] + terms[2];
}

}  // namespace spinosc::separable
