// Random per-atom phase offsets: exact factorized per-sample moments, Gaussian
// averaging, and a full 2^N-space reference.
#include "spinosc/dephasing.hpp"

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "spinosc/errors.hpp"
#include "spinosc/oracle.hpp"

namespace spinosc::dephasing {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

struct EntryView {
  double MomentTable::* field;
};

constexpr std::array<double MomentTable::*, 17> kEntries = {
    &MomentTable::jx,   &MomentTable::jy,   &MomentTable::jz,  &MomentTable::q,
    &MomentTable::p,    &MomentTable::jx2,  &MomentTable::jy2, &MomentTable::jz2,
    &MomentTable::q2,   &MomentTable::p2,   &MomentTable::qp,  &MomentTable::q_jx,
    &MomentTable::q_jy, &MomentTable::q_jz, &MomentTable::p_jx, &MomentTable::p_jy,
    &MomentTable::p_jz};

int checked_atoms(const ScenarioConfig& c) {
  const int n = static_cast<int>(std::lround(c.n_atoms));
  if (std::abs(c.n_atoms - n) > 1e-9 || n < 1) {
    throw Error("dephasing moments need an integer atom number >= 1");
  }
  return n;
}

}  // namespace

MomentTable sample_moments(const ScenarioConfig& c, const std::vector<double>& alpha,
                           bool include_squeezing) {
  const int n = checked_atoms(c);
  if (static_cast<int>(alpha.size()) != n) {
    throw Error("offset vector length must equal the atom number");
  }
  const double x = c.x();
  const double u = 1.0 - std::cos(x);
  const double s = std::sin(x);
  const double l = c.lambda;
  const double l2 = l * l;
  const double chi = (include_squeezing ? l2 * x : 0.0) - l2 * s;
  const double qf = std::sqrt(1.0 / (2.0 * c.mass * c.omega));
  const double pf = std::sqrt(c.mass * c.omega / 2.0);

  cd s1{0.0, 0.0}, s2{0.0, 0.0};
  for (double a : alpha) {
    s1 += std::exp(I * a);
    s2 += std::exp(2.0 * I * a);
  }
  const cd s1c = std::conj(s1);

  const double g1 = std::exp(-l2 * u);        // one-flip coherent overlap
  const double g2 = std::exp(-4.0 * l2 * u);  // two-flip coherent overlap
  const double g0 = std::cos(chi);            // per-atom phase factor
  const cd f1 = -I * std::sin(chi);           // per-atom phase factor weighted by t_k
  const double e0 = std::pow(g0, n - 1);
  const cd e1 = n >= 2 ? double(n - 1) * f1 * std::pow(g0, n - 2) : cd{0.0, 0.0};
  const double c2 = n >= 2 ? std::pow(std::cos(2.0 * chi), n - 2) : 0.0;

  // Raising-part expectations <J_+ (x) O>; the hermitian moments follow from the real
  // and imaginary parts.
  const cd jp = 0.5 * s1c * g1 * e0;
  const cd jp_q = 0.5 * s1c * (-l * qf) * g1 * (u * e1 - I * (s * e0));
  const cd jp_p = 0.5 * s1c * (-l * pf) * g1 * (I * (u * e0) + s * e1);

  const double pair = std::real(s1 * s1 - s2);
  const double diag = std::norm(s1) - n;

  MomentTable t;
  t.jx = jp.real();
  t.jy = jp.imag();
  t.jz = 0.0;
  t.q = 0.0;
  t.p = 0.0;
  t.jx2 = 0.25 * n + 0.125 * pair * g2 * c2 + 0.125 * diag;
  t.jy2 = 0.25 * n - 0.125 * pair * g2 * c2 + 0.125 * diag;
  t.jz2 = 0.25 * n;
  t.q2 = qf * qf * (1.0 + l2 * n * u * u);
  t.p2 = pf * pf * (1.0 + l2 * n * s * s);
  t.qp = l2 * n * u * s;
  t.q_jx = 2.0 * jp_q.real();
  t.q_jy = 2.0 * jp_q.imag();
  t.q_jz = -l * qf * u * n;
  t.p_jx = 2.0 * jp_p.real();
  t.p_jy = 2.0 * jp_p.imag();
  t.p_jz = -l * pf * s * n;
  return t;
}

DephaseAverage dephase_average(const ScenarioConfig& c, int n_samples, std::uint64_t seed,
                               bool include_squeezing) {
  if (n_samples < 2) throw Error("dephase_average needs at least two samples");
  const int n = checked_atoms(c);
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(c.sigma2));
  std::vector<double> alpha(n);

  std::array<double, 17> mean{};
  std::array<double, 17> m2{};
  for (int k = 0; k < n_samples; ++k) {
    for (double& a : alpha) a = gauss(eng);
    const MomentTable t = sample_moments(c, alpha, include_squeezing);
    for (std::size_t i = 0; i < kEntries.size(); ++i) {
      const double v = t.*kEntries[i];
      const double d = v - mean[i];
      mean[i] += d / (k + 1);
      m2[i] += d * (v - mean[i]);
    }
  }
  DephaseAverage out;
  out.n_samples = n_samples;
  for (std::size_t i = 0; i < kEntries.size(); ++i) {
    out.mean.*kEntries[i] = mean[i];
    out.std_err.*kEntries[i] =
        std::sqrt(m2[i] / (n_samples - 1.0) / n_samples);
  }
  return out;
}

MomentTable brute_force_moments(const ScenarioConfig& c, const std::vector<double>& alpha,
                                int fock_dim, bool include_squeezing) {
  const int n = checked_atoms(c);
  if (static_cast<int>(alpha.size()) != n) {
    throw Error("offset vector length must equal the atom number");
  }
  if (n > 12) throw OracleScaleExceeded("brute force reference is limited to n <= 12");
  const int dim = 1 << n;
  const double x = c.x();
  const double s = std::sin(x);
  const double l2 = c.lambda * c.lambda;
  const double chi = (include_squeezing ? l2 * x : 0.0) - l2 * s;
  const cd z = 1.0 - std::exp(-I * x);

  // Oscillator block per J_z eigenvalue; index k counts up-spins, m = k - n/2.
  std::vector<Eigen::VectorXcd> psi(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double m = k - 0.5 * n;
    psi[k] = std::exp(I * (chi * m * m)) *
             oracle::displaced_fock_column(-c.lambda * m * z, 0, fock_dim);
  }

  // Spin-configuration amplitudes: bit j set means atom j up; down picks up e^{-i a_j}.
  Eigen::VectorXcd amp(dim);
  std::vector<int> ups(dim);
  const double norm = std::pow(2.0, -0.5 * n);
  for (int b = 0; b < dim; ++b) {
    cd a{norm, 0.0};
    int k = 0;
    for (int j = 0; j < n; ++j) {
      if (b & (1 << j)) {
        ++k;
      } else {
        a *= std::exp(-I * alpha[j]);
      }
    }
    amp(b) = a;
    ups[b] = k;
  }

  Eigen::MatrixXcd jx = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    jz(b, b) = ups[b] - 0.5 * n;
    for (int j = 0; j < n; ++j) {
      const int flipped = b ^ (1 << j);
      jx(flipped, b) += 0.5;
      // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
      jy(flipped, b) += (b & (1 << j)) ? 0.5 * I : -0.5 * I;
    }
  }

  const double qf = std::sqrt(1.0 / (2.0 * c.mass * c.omega));
  const double pf = std::sqrt(c.mass * c.omega / 2.0);
  Eigen::MatrixXcd low = Eigen::MatrixXcd::Zero(fock_dim, fock_dim);
  for (int q = 1; q < fock_dim; ++q) low(q - 1, q) = std::sqrt(double(q));
  const Eigen::MatrixXcd qop = qf * (low + low.adjoint());
  const Eigen::MatrixXcd pop = I * pf * (low.adjoint() - low);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(fock_dim, fock_dim);
  const Eigen::MatrixXcd q2op = qop * qop;
  const Eigen::MatrixXcd p2op = pop * pop;
  const Eigen::MatrixXcd qpop = qop * pop + pop * qop;

  // Oscillator overlap tables <psi_k' | O | psi_k>.
  auto overlaps = [&](const Eigen::MatrixXcd& op) {
    Eigen::MatrixXcd w(n + 1, n + 1);
    for (int k2 = 0; k2 <= n; ++k2) {
      const Eigen::VectorXcd opk = op * psi[k2];
      for (int k1 = 0; k1 <= n; ++k1) w(k1, k2) = psi[k1].dot(opk);
    }
    return w;
  };
  const Eigen::MatrixXcd w_i = overlaps(id);
  const Eigen::MatrixXcd w_q = overlaps(qop);
  const Eigen::MatrixXcd w_p = overlaps(pop);
  const Eigen::MatrixXcd w_q2 = overlaps(q2op);
  const Eigen::MatrixXcd w_p2 = overlaps(p2op);
  const Eigen::MatrixXcd w_qp = overlaps(qpop);

  auto expect = [&](const Eigen::MatrixXcd& spin, const Eigen::MatrixXcd& osc) {
    cd acc{0.0, 0.0};
    for (int b2 = 0; b2 < dim; ++b2) {
      for (int b1 = 0; b1 < dim; ++b1) {
        const cd el = spin(b1, b2);
        if (el == cd{0.0, 0.0}) continue;
        acc += std::conj(amp(b1)) * el * amp(b2) * osc(ups[b1], ups[b2]);
      }
    }
    if (std::abs(acc.imag()) > 1e-10 * (1.0 + std::abs(acc.real()))) {
      throw Error("brute force expectation acquired an imaginary part");
    }
    return acc.real();
  };

  const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(dim, dim);
  MomentTable t;
  t.jx = expect(jx, w_i);
  t.jy = expect(jy, w_i);
  t.jz = expect(jz, w_i);
  t.q = expect(ident, w_q);
  t.p = expect(ident, w_p);
  t.jx2 = expect(jx * jx, w_i);
  t.jy2 = expect(jy * jy, w_i);
  t.jz2 = expect(jz * jz, w_i);
  t.q2 = expect(ident, w_q2);
  t.p2 = expect(ident, w_p2);
  t.qp = expect(ident, w_qp);
  t.q_jx = 2.0 * expect(jx, w_q);
  t.q_jy = 2.0 * expect(jy, w_q);
  t.q_jz = 2.0 * expect(jz, w_q);
  t.p_jx = 2.0 * expect(jx, w_p);
  t.p_jy = 2.0 * expect(jy, w_p);
  t.p_jz = 2.0 * expect(jz, w_p);
  return t;
}

}  // namespace spinosc::dephasing
