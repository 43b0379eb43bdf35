// Exact evolution on (symmetric spin) x (truncated Fock): sector propagators,
// moment extraction, spectral observable models, and projective sampling.
#include "spinosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "spinosc/errors.hpp"

namespace spinosc::oracle {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

int n_atoms_int(const ScenarioConfig& c) {
  const int n = static_cast<int>(std::lround(c.n_atoms));
  if (std::abs(c.n_atoms - n) > 1e-9 || n < 1) {
    throw OracleScaleExceeded("exact evolution needs an integer atom number >= 1");
  }
  if (n > 12) {
    throw OracleScaleExceeded("exact evolution is limited to n_atoms <= 12");
  }
  return n;
}

Eigen::MatrixXcd fock_annihilation(int dim) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) c(n - 1, n) = std::sqrt(static_cast<double>(n));
  return c;
}

struct FockOps {
  Eigen::MatrixXcd q, p, q2, p2, qp_sym;  // qp_sym = qp + pq
};

FockOps fock_ops(int dim, double mass, double omega) {
  const double qf = std::sqrt(1.0 / (2.0 * mass * omega));
  const double pf = std::sqrt(mass * omega / 2.0);
  const Eigen::MatrixXcd c = fock_annihilation(dim);
  const Eigen::MatrixXcd cd_ = c.adjoint();
  FockOps ops;
  ops.q = qf * (c + cd_);
  ops.p = I * pf * (cd_ - c);
  ops.q2 = ops.q * ops.q;
  ops.p2 = ops.p * ops.p;
  ops.qp_sym = ops.q * ops.p + ops.p * ops.q;
  return ops;
}

double real_checked(cd v, const char* what) {
  const double tol = 1e-10 * (1.0 + std::abs(v.real()));
  if (std::abs(v.imag()) > tol) {
    throw Error(std::string("expectation value of ") + what +
                " has a non-negligible imaginary part");
  }
  return v.real();
}

double pair_expectation(const Eigen::MatrixXcd& spin, const Eigen::MatrixXcd& gram,
                        const char* what) {
  return real_checked(spin.cwiseProduct(gram).sum(), what);
}

}  // namespace

Eigen::MatrixXcd spin_matrix(int n_atoms, int axis) {
  const int dim = n_atoms + 1;
  const double j = 0.5 * n_atoms;
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double m = k - j;
    jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  if (axis == 0) return 0.5 * (jp + jp.adjoint());
  if (axis == 1) return -0.5 * I * (jp - jp.adjoint());
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) jz(k, k) = k - j;
  return jz;
}

Eigen::VectorXcd displaced_fock_column(cd d, int initial_fock, int fock_dim) {
  Eigen::VectorXcd v(fock_dim);
  const double d2 = std::norm(d);
  // coherent column D(d)|0>
  v(0) = std::exp(-0.5 * d2);
  for (int n = 1; n < fock_dim; ++n) v(n) = v(n - 1) * d / std::sqrt(double(n));
  // raise: D(d)|k> = (c^dag - d*) D(d)|k-1> / sqrt(k)
  for (int k = 1; k <= initial_fock; ++k) {
    Eigen::VectorXcd w(fock_dim);
    w(0) = -std::conj(d) * v(0);
    for (int n = 1; n < fock_dim; ++n) {
      w(n) = std::sqrt(double(n)) * v(n - 1) - std::conj(d) * v(n);
    }
    v = w / std::sqrt(double(k));
  }
  return v;
}

int default_fock_dim(const ScenarioConfig& c, int initial_fock) {
  const double mu = c.lambda * c.lambda * c.n_atoms * c.n_atoms;
  const int spread =
      static_cast<int>(std::ceil(8.0 * std::sqrt(mu * (initial_fock + 1.0)) + 4.0 * mu));
  return std::max(initial_fock + 4, initial_fock + 16 + spread);
}

EvolvedState evolve(const ScenarioConfig& c, HilbertSpec spec, bool include_squeezing,
                    int initial_fock) {
  const int n = n_atoms_int(c);
  const double j = 0.5 * n;
  const double x = c.x();
  const double s = std::sin(x);
  const double l2 = c.lambda * c.lambda;
  const double chi = (include_squeezing ? l2 * x : 0.0) - l2 * s;
  const cd z = 1.0 - std::exp(-I * x);

  int fock = spec.fock_dim > 0 ? spec.fock_dim : default_fock_dim(c, initial_fock);
  for (;;) {
    EvolvedState st;
    st.n_atoms = n;
    st.fock_dim = fock;
    st.mass = c.mass;
    st.omega = c.omega;
    st.include_squeezing = include_squeezing;
    st.sectors.resize(fock, n + 1);
    double norm2 = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double m = k - j;
      const double cm = std::pow(2.0, -0.5 * n) * std::sqrt(binomial(n, k));
      const cd phase =
          std::exp(I * (chi * m * m)) * std::exp(-I * (x * initial_fock));
      const cd dm = -c.lambda * m * z;
      st.sectors.col(k) = cm * phase * displaced_fock_column(dm, initial_fock, fock);
      norm2 += st.sectors.col(k).squaredNorm();
    }
    st.tail = 1.0 - norm2;
    if (st.tail <= spec.tail_tol) {
      st.sectors /= std::sqrt(norm2);
      return st;
    }
    if (spec.fock_dim > 0 || fock >= 4096) {
      throw TruncationInsufficient("Fock truncation leaks more population than tail_tol");
    }
    fock *= 2;
  }
}

EvolvedState evolve_dense(const ScenarioConfig& c, HilbertSpec spec, int initial_fock) {
  const int n = n_atoms_int(c);
  const double j = 0.5 * n;
  const double x = c.x();
  const int fock = spec.fock_dim > 0 ? spec.fock_dim : default_fock_dim(c, initial_fock);

  EvolvedState st;
  st.n_atoms = n;
  st.fock_dim = fock;
  st.mass = c.mass;
  st.omega = c.omega;
  st.include_squeezing = true;
  st.sectors.resize(fock, n + 1);
  Eigen::MatrixXd hop = Eigen::MatrixXd::Zero(fock, fock);
  for (int q = 1; q < fock; ++q) {
    hop(q - 1, q) = std::sqrt(static_cast<double>(q));
    hop(q, q - 1) = hop(q - 1, q);
  }
  double norm2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double m = k - j;
    Eigen::MatrixXd h = c.lambda * m * hop;
    for (int q = 0; q < fock; ++q) h(q, q) += q;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<cd>().array() * (-I * x)).exp().matrix();
    const double cm = std::pow(2.0, -0.5 * n) * std::sqrt(binomial(n, k));
    const Eigen::VectorXcd start =
        es.eigenvectors().row(initial_fock).transpose().cast<cd>();
    st.sectors.col(k) =
        cm * (es.eigenvectors().cast<cd>() * phases.cwiseProduct(start));
    norm2 += st.sectors.col(k).squaredNorm();
  }
  st.tail = 1.0 - norm2;
  if (st.tail > spec.tail_tol) {
    throw TruncationInsufficient("Fock truncation leaks more population than tail_tol");
  }
  st.sectors /= std::sqrt(norm2);
  return st;
}

double state_overlap(const EvolvedState& a, const EvolvedState& b) {
  if (a.n_atoms != b.n_atoms) throw Error("states live on different spin spaces");
  const int fock = std::min(a.fock_dim, b.fock_dim);
  cd overlap = 0.0;
  for (int k = 0; k <= a.n_atoms; ++k) {
    overlap += a.sectors.col(k).head(fock).dot(b.sectors.col(k).head(fock));
  }
  return std::abs(overlap);
}

MomentTable moments(const EvolvedState& st) {
  const int n = st.n_atoms;
  const Eigen::MatrixXcd jx = spin_matrix(n, 0);
  const Eigen::MatrixXcd jy = spin_matrix(n, 1);
  const Eigen::MatrixXcd jz = spin_matrix(n, 2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  const FockOps ops = fock_ops(st.fock_dim, st.mass, st.omega);

  const Eigen::MatrixXcd& b = st.sectors;
  const Eigen::MatrixXcd g_i = b.adjoint() * b;
  const Eigen::MatrixXcd g_q = b.adjoint() * (ops.q * b);
  const Eigen::MatrixXcd g_p = b.adjoint() * (ops.p * b);
  const Eigen::MatrixXcd g_q2 = b.adjoint() * (ops.q2 * b);
  const Eigen::MatrixXcd g_p2 = b.adjoint() * (ops.p2 * b);
  const Eigen::MatrixXcd g_qp = b.adjoint() * (ops.qp_sym * b);

  MomentTable t;
  t.jx = pair_expectation(jx, g_i, "J_x");
  t.jy = pair_expectation(jy, g_i, "J_y");
  t.jz = pair_expectation(jz, g_i, "J_z");
  t.q = pair_expectation(id, g_q, "q");
  t.p = pair_expectation(id, g_p, "p");
  t.jx2 = pair_expectation(jx * jx, g_i, "J_x^2");
  t.jy2 = pair_expectation(jy * jy, g_i, "J_y^2");
  t.jz2 = pair_expectation(jz * jz, g_i, "J_z^2");
  t.q2 = pair_expectation(id, g_q2, "q^2");
  t.p2 = pair_expectation(id, g_p2, "p^2");
  t.qp = pair_expectation(id, g_qp, "qp + pq");
  t.q_jx = 2.0 * pair_expectation(jx, g_q, "q J_x");
  t.q_jy = 2.0 * pair_expectation(jy, g_q, "q J_y");
  t.q_jz = 2.0 * pair_expectation(jz, g_q, "q J_z");
  t.p_jx = 2.0 * pair_expectation(jx, g_p, "p J_x");
  t.p_jy = 2.0 * pair_expectation(jy, g_p, "p J_y");
  t.p_jz = 2.0 * pair_expectation(jz, g_p, "p J_z");
  return t;
}

namespace {

struct ThermalWeights {
  std::vector<double> w;
  double total{};
};

ThermalWeights thermal_weights(double nbar) {
  ThermalWeights tw;
  if (nbar <= 0.0) {
    tw.w = {1.0};
    tw.total = 1.0;
    return tw;
  }
  const double ratio = nbar / (nbar + 1.0);
  double w = 1.0 / (nbar + 1.0);
  double cum = 0.0;
  while (cum < 1.0 - 1e-12) {
    tw.w.push_back(w);
    cum += w;
    w *= ratio;
    if (tw.w.size() > 100000) break;
  }
  tw.total = cum;
  return tw;
}

MomentTable scale_add(const MomentTable& a, const MomentTable& b, double wb) {
  MomentTable t = a;
  t.jx += wb * b.jx;
  t.jy += wb * b.jy;
  t.jz += wb * b.jz;
  t.q += wb * b.q;
  t.p += wb * b.p;
  t.jx2 += wb * b.jx2;
  t.jy2 += wb * b.jy2;
  t.jz2 += wb * b.jz2;
  t.q2 += wb * b.q2;
  t.p2 += wb * b.p2;
  t.qp += wb * b.qp;
  t.q_jx += wb * b.q_jx;
  t.q_jy += wb * b.q_jy;
  t.q_jz += wb * b.q_jz;
  t.p_jx += wb * b.p_jx;
  t.p_jy += wb * b.p_jy;
  t.p_jz += wb * b.p_jz;
  return t;
}

MomentTable scale(const MomentTable& a, double f) {
  MomentTable zero{};
  return scale_add(zero, a, f);
}

}  // namespace

MomentTable thermal_moments(const ScenarioConfig& c, HilbertSpec spec,
                            bool include_squeezing) {
  const ThermalWeights tw = thermal_weights(c.nbar);
  const int n0_max = static_cast<int>(tw.w.size()) - 1;
  HilbertSpec sized = spec;
  if (sized.fock_dim == 0) sized.fock_dim = default_fock_dim(c, n0_max);
  MomentTable acc{};
  for (int n0 = 0; n0 <= n0_max; ++n0) {
    const EvolvedState st = evolve(c, sized, include_squeezing, n0);
    acc = scale_add(acc, moments(st), tw.w[n0]);
  }
  return scale(acc, 1.0 / tw.total);
}

namespace {

Eigen::MatrixXcd observable_matrix(int n_atoms, int fock, double mass, double omega,
                                   const ObservableSpec& obs) {
  if (obs.axis < 0 || obs.axis > 2) throw Error("observable axis must be 0, 1, or 2");
  const Eigen::MatrixXcd jmu = spin_matrix(n_atoms, obs.axis);
  const FockOps ops = fock_ops(fock, mass, omega);
  const Eigen::MatrixXcd osc = obs.a * ops.q + obs.b * ops.p;
  const int dim = (n_atoms + 1) * fock;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k2 = 0; k2 <= n_atoms; ++k2) {
    for (int k1 = 0; k1 <= n_atoms; ++k1) {
      if (jmu(k1, k2) != cd(0.0, 0.0)) {
        full.block(k1 * fock, k2 * fock, fock, fock) +=
            jmu(k1, k2) * Eigen::MatrixXcd::Identity(fock, fock);
      }
    }
    full.block(k2 * fock, k2 * fock, fock, fock) += osc;
  }
  return full;
}

Eigen::VectorXcd stacked_state(const EvolvedState& st) {
  const int fock = st.fock_dim;
  Eigen::VectorXcd psi((st.n_atoms + 1) * fock);
  for (int k = 0; k <= st.n_atoms; ++k) psi.segment(k * fock, fock) = st.sectors.col(k);
  return psi;
}

ObservableModel model_from_spectrum(const Eigen::VectorXd& vals, Eigen::VectorXd probs) {
  probs /= probs.sum();
  ObservableModel m;
  m.eigenvalues = vals;
  m.probabilities = probs;
  m.mean = probs.dot(vals);
  const Eigen::ArrayXd centered = vals.array() - m.mean;
  m.variance = (probs.array() * centered.square()).sum();
  m.mu4_central = (probs.array() * centered.square().square()).sum();
  return m;
}

}  // namespace

ObservableModel observable_model(const EvolvedState& st, const ObservableSpec& obs) {
  const Eigen::MatrixXcd full =
      observable_matrix(st.n_atoms, st.fock_dim, st.mass, st.omega, obs);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
  const Eigen::VectorXcd amp = es.eigenvectors().adjoint() * stacked_state(st);
  return model_from_spectrum(es.eigenvalues(), amp.cwiseAbs2());
}

ObservableModel observable_model(const ScenarioConfig& c, HilbertSpec spec,
                                 const ObservableSpec& obs) {
  if (c.scenario == Scenario::Noiseless) {
    return observable_model(evolve(c, spec), obs);
  }
  if (c.scenario != Scenario::ThermalInitial) {
    throw Error("observable sampling covers the noiseless and thermal initial scenarios");
  }
  const ThermalWeights tw = thermal_weights(c.nbar);
  const int n0_max = static_cast<int>(tw.w.size()) - 1;
  HilbertSpec sized = spec;
  if (sized.fock_dim == 0) sized.fock_dim = default_fock_dim(c, n0_max);
  const EvolvedState first = evolve(c, sized);
  const Eigen::MatrixXcd full =
      observable_matrix(first.n_atoms, sized.fock_dim, c.mass, c.omega, obs);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(es.eigenvalues().size());
  for (int n0 = 0; n0 <= n0_max; ++n0) {
    const EvolvedState st = evolve(c, sized, true, n0);
    const Eigen::VectorXcd amp = es.eigenvectors().adjoint() * stacked_state(st);
    probs += tw.w[n0] * amp.cwiseAbs2();
  }
  return model_from_spectrum(es.eigenvalues(), probs);
}

std::vector<double> sample_model(const ObservableModel& model, int n_shots,
                                 std::uint64_t seed) {
  std::vector<double> cdf(model.probabilities.size());
  double cum = 0.0;
  for (int i = 0; i < model.probabilities.size(); ++i) {
    cum += model.probabilities(i);
    cdf[i] = cum;
  }
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n_shots);
  for (int i = 0; i < n_shots; ++i) {
    const double r = unif(eng) * cum;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), r);
    const auto idx = std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1);
    out[i] = model.eigenvalues(idx);
  }
  return out;
}

std::vector<double> sample_observable(const EvolvedState& st, const ObservableSpec& obs,
                                      int n_shots, std::uint64_t seed) {
  return sample_model(observable_model(st, obs), n_shots, seed);
}

}  // namespace spinosc::oracle
