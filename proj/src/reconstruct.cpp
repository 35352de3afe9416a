#include "ququart/reconstruct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ququart/errors.hpp"
#include "ququart/kernels.hpp"
#include "ququart/rng.hpp"

namespace ququart {

namespace {

using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Design = Eigen::Matrix<double, Eigen::Dynamic, 16>;

constexpr double kSingularCondition = 1e12;

Design design_matrix(const std::vector<Vector4c>& rows) {
  Design a(static_cast<Eigen::Index>(rows.size()), 16);
  for (std::size_t nu = 0; nu < rows.size(); ++nu) {
    const auto row = moment_row(rows[nu]);
    for (int j = 0; j < 16; ++j) a(static_cast<Eigen::Index>(nu), j) = row[j];
  }
  return a;
}

bool same_setting(const MeasurementRecord& a, const MeasurementRecord& b) {
  if (a.setting.index() != b.setting.index()) return false;
  if (const auto* s = std::get_if<Protocol1Setting>(&a.setting)) {
    return *s == std::get<Protocol1Setting>(b.setting);
  }
  const auto& x = std::get<Protocol2Setting>(a.setting);
  const auto& y = std::get<Protocol2Setting>(b.setting);
  return x.theta == y.theta && x.phi == y.phi && x.plate1.thickness_mm == y.plate1.thickness_mm &&
         x.plate2.thickness_mm == y.plate2.thickness_mm;
}

std::size_t distinct_settings(const RecordSet& records) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < records.records.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = same_setting(records.records[i], records.records[j]);
    if (!seen) ++n;
  }
  return n;
}

void validate(const RecordSet& records) {
  const std::size_t want = records.protocol == Protocol::p1 ? 0 : 1;
  for (std::size_t nu = 0; nu < records.records.size(); ++nu) {
    const auto& r = records.records[nu];
    if (r.setting.index() != want) {
      throw ProtocolError("record " + std::to_string(nu) + " does not belong to protocol " +
                          std::string(protocol_name(records.protocol)));
    }
    if (!std::isfinite(r.counts) || r.counts < 0.0) {
      throw ProtocolError("record " + std::to_string(nu) + " has invalid counts");
    }
    if (!std::isfinite(r.exposure_s) || r.exposure_s <= 0.0) {
      throw ProtocolError("record " + std::to_string(nu) + " has non-positive exposure");
    }
  }
}

// Counts per unit of mean exposure, the right-hand side of the moment system.
Eigen::VectorXd normalized_counts(const RecordSet& records) {
  double mean = 0.0;
  for (const auto& r : records.records) mean += r.exposure_s;
  mean /= static_cast<double>(records.records.size());
  Eigen::VectorXd b(static_cast<Eigen::Index>(records.records.size()));
  for (std::size_t nu = 0; nu < records.records.size(); ++nu) {
    b[static_cast<Eigen::Index>(nu)] = records.records[nu].counts * mean / records.records[nu].exposure_s;
  }
  return b;
}

// Likelihood problem over x in R^8.
class Problem {
 public:
  explicit Problem(const RecordSet& records)
      : batch_(measurement_vectors(records)), kernels_(kernels::active()) {
    const std::size_t n = records.records.size();
    counts_.resize(n);
    rel_.resize(n);
    double mean = 0.0;
    for (const auto& r : records.records) mean += r.exposure_s;
    mean /= static_cast<double>(n);
    for (std::size_t nu = 0; nu < n; ++nu) {
      counts_[nu] = records.records[nu].counts;
      rel_[nu] = records.records[nu].exposure_s / mean;
      total_ += counts_[nu];
    }
  }

  std::size_t size() const { return counts_.size(); }
  double total() const { return total_; }

  struct Workspace {
    std::vector<double> m_re, m_im, mu, w1, w2, w3;
    explicit Workspace(std::size_t n) : m_re(n), m_im(n), mu(n), w1(n), w2(n), w3(n) {}
  };

  double value(const kernels::Packed& x, Workspace& ws) const {
    kernels_.amplitudes(batch_.view(), x, ws.m_re.data(), ws.m_im.data());
    double l = 0.0;
    for (std::size_t nu = 0; nu < size(); ++nu) {
      const double mu = rel_[nu] * (ws.m_re[nu] * ws.m_re[nu] + ws.m_im[nu] * ws.m_im[nu]);
      ws.mu[nu] = mu;
      if (counts_[nu] > 0.0) {
        if (!(mu > 0.0)) return -std::numeric_limits<double>::infinity();
        l += counts_[nu] * std::log(mu);
      }
      l -= mu;
    }
    return l;
  }

  // Call after value() on the same x.
  void derivatives(Workspace& ws, Vector8& g, Matrix8& h) const {
    for (std::size_t nu = 0; nu < size(); ++nu) {
      const double e = rel_[nu];
      const double ratio = counts_[nu] > 0.0 ? counts_[nu] / ws.mu[nu] : 0.0;
      const double c1 = 2.0 * e * (ratio - 1.0);
      ws.w1[nu] = c1 * ws.m_re[nu];
      ws.w2[nu] = c1 * ws.m_im[nu];
    }
    kernels::Packed gp;
    kernels_.gradient(batch_.view(), ws.w1.data(), ws.w2.data(), gp);
    for (int k = 0; k < 8; ++k) g[k] = gp[k];

    for (std::size_t nu = 0; nu < size(); ++nu) {
      const double e = rel_[nu];
      const double ratio = counts_[nu] > 0.0 ? counts_[nu] / ws.mu[nu] : 0.0;
      const double c1 = 2.0 * e * (ratio - 1.0);
      const double c2 = counts_[nu] > 0.0 ? 4.0 * e * e * ratio / ws.mu[nu] : 0.0;
      const double re = ws.m_re[nu];
      const double im = ws.m_im[nu];
      ws.w1[nu] = c1 - c2 * re * re;
      ws.w2[nu] = -c2 * re * im;
      ws.w3[nu] = c1 - c2 * im * im;
    }
    kernels::Hessian8 hp;
    kernels_.hessian(batch_.view(), ws.w1.data(), ws.w2.data(), ws.w3.data(), hp);
    for (int k = 0; k < 8; ++k) {
      for (int l = 0; l < 8; ++l) h(k, l) = hp[k * 8 + l];
    }
  }

  double residual(const kernels::Packed& x, Workspace& ws) const {
    value(x, ws);
    double chi2 = 0.0;
    for (std::size_t nu = 0; nu < size(); ++nu) {
      const double d = counts_[nu] - ws.mu[nu];
      chi2 += d * d / std::max(ws.mu[nu], 1.0);
    }
    const double dof = std::max<double>(static_cast<double>(size()) - 8.0, 1.0);
    return chi2 / dof;
  }

  // Rescales a unit vector so that the predicted total matches the counts.
  kernels::Packed scaled(const QuquartState& state, Workspace& ws) const {
    kernels::Packed x = kernels::pack(state.amplitudes());
    value(x, ws);
    double predicted = 0.0;
    for (std::size_t nu = 0; nu < size(); ++nu) predicted += ws.mu[nu];
    const double f = predicted > 0.0 ? std::sqrt(total_ / predicted) : std::sqrt(total_);
    for (double& v : x) v *= f;
    return x;
  }

 private:
  kernels::MeasurementBatch batch_;
  const kernels::KernelTable& kernels_;
  std::vector<double> counts_;
  std::vector<double> rel_;
  double total_ = 0.0;
};

struct StartResult {
  kernels::Packed x{};
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

Vector8 to_vec(const kernels::Packed& x) {
  Vector8 v;
  for (int k = 0; k < 8; ++k) v[k] = x[k];
  return v;
}

kernels::Packed to_packed(const Vector8& v) {
  kernels::Packed x;
  for (int k = 0; k < 8; ++k) x[k] = v[k];
  return x;
}

StartResult newton(const Problem& problem, kernels::Packed x, const MlOptions& options, Rng& rng) {
  Problem::Workspace ws(problem.size());
  double l = problem.value(x, ws);
  // a zero predicted rate where counts were seen: nudge off the boundary
  std::normal_distribution<double> gauss;
  for (int attempt = 0; !std::isfinite(l) && attempt < 20; ++attempt) {
    const double norm = std::sqrt(to_vec(x).squaredNorm());
    for (double& v : x) v += 1e-3 * std::max(norm, 1.0) * gauss(rng);
    l = problem.value(x, ws);
  }
  StartResult out;
  out.x = x;
  out.value = l;
  if (!std::isfinite(l)) return out;

  const double total = std::max(problem.total(), 1.0);
  Vector8 g;
  Matrix8 h;
  double damping = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    problem.value(x, ws);
    problem.derivatives(ws, g, h);
    const Vector8 xv = to_vec(x);
    if (g.norm() * xv.norm() / total < options.tolerance) {
      out.converged = true;
      break;
    }
    out.iterations = it + 1;
    Eigen::SelfAdjointEigenSolver<Matrix8> eig(-h);
    const Vector8 lam = eig.eigenvalues().cwiseAbs();
    const double top = std::max(lam.maxCoeff(), std::numeric_limits<double>::min());
    const Vector8 proj = eig.eigenvectors().transpose() * g;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      Vector8 scaled_proj;
      for (int k = 0; k < 8; ++k) scaled_proj[k] = proj[k] / (std::max(lam[k], 1e-12 * top) + damping);
      const kernels::Packed trial = to_packed(xv + eig.eigenvectors() * scaled_proj);
      const double lt = problem.value(trial, ws);
      if (std::isfinite(lt) && lt >= l) {
        x = trial;
        l = lt;
        damping = damping * 0.1 < 1e-14 * top ? 0.0 : damping * 0.1;
        accepted = true;
        break;
      }
      damping = std::max(damping * 10.0, 1e-6 * top);
    }
    if (!accepted) break;
  }
  out.x = x;
  out.value = l;
  return out;
}

void for_each_start(int count, int threads, const std::function<void(int)>& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

QuquartState fix_gauge(const Vector4c& y) {
  return QuquartState::normalized(y).canonical_phase();
}

}  // namespace

CoherenceMatrix4 project_psd(const Matrix4c& k) {
  const Matrix4c herm = 0.5 * (k + k.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(herm);
  Eigen::Vector4d lam = eig.eigenvalues().cwiseMax(0.0);
  const double trace = lam.sum();
  if (!(trace > 0.0)) throw DomainError("moment matrix has no positive eigenvalue");
  lam /= trace;
  CoherenceMatrix4 out;
  out.k = eig.eigenvectors() * lam.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return out;
}

double design_condition(const std::vector<Vector4c>& rows) {
  if (rows.size() < 16) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design_matrix(rows));
  const auto& s = svd.singularValues();
  if (s[15] <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[15];
}

CoherenceMatrix4 linear_invert_p1(const RecordSet& records) {
  if (records.protocol != Protocol::p1 || records.records.size() != 16) {
    throw ProtocolError("linear inversion requires the 16 Protocol 1 settings, got " +
                        std::to_string(records.records.size()) + " records");
  }
  validate(records);
  const auto rows = measurement_vectors(records);
  if (distinct_settings(records) != 16 || design_condition(rows) > kSingularCondition) {
    throw ProtocolError("singular Protocol 1 system: the 16 settings are not independent");
  }
  const Eigen::Matrix<double, 16, 16> a = design_matrix(rows);
  const Eigen::Matrix<double, 16, 1> m = a.partialPivLu().solve(normalized_counts(records));
  std::array<double, 16> moments{};
  for (int j = 0; j < 16; ++j) moments[j] = m[j];
  return project_psd(coherence_from_moments(moments).k);
}

CoherenceMatrix4 linear_invert(const RecordSet& records) {
  validate(records);
  const auto rows = measurement_vectors(records);
  if (design_condition(rows) > kSingularCondition) {
    throw ProtocolError("record set does not determine all 16 moments");
  }
  const Eigen::MatrixXd a = design_matrix(rows);
  const Eigen::VectorXd m = a.colPivHouseholderQr().solve(normalized_counts(records));
  std::array<double, 16> moments{};
  for (int j = 0; j < 16; ++j) moments[j] = m[j];
  return project_psd(coherence_from_moments(moments).k);
}

QuquartState principal_state(const CoherenceMatrix4& k) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(0.5 * (k.k + k.k.adjoint()));
  return QuquartState::normalized(eig.eigenvectors().col(3).conjugate()).canonical_phase();
}

ReconstructionResult ml_refine(const RecordSet& records, const QuquartState& initial,
                               const MlOptions& options) {
  validate(records);
  if (distinct_settings(records) < 8) {
    throw ProtocolError("maximum-likelihood fit needs at least 8 distinct settings, got " +
                        std::to_string(distinct_settings(records)));
  }
  const Problem problem(records);
  if (!(problem.total() > 0.0)) throw DomainError("all counts are zero; nothing to reconstruct");
  if (options.multistarts < 0) throw DomainError("multistart count must be non-negative");

  const int starts = options.multistarts + 1;
  std::vector<StartResult> results(static_cast<std::size_t>(starts));
  for_each_start(starts, options.threads, [&](int i) {
    Problem::Workspace ws(problem.size());
    Rng rng = substream(options.seed, static_cast<std::uint64_t>(i));
    const QuquartState start = i == 0 ? initial : random_pure_state(rng());
    results[static_cast<std::size_t>(i)] = newton(problem, problem.scaled(start, ws), options, rng);
  });

  // likelihoods equal to rounding count as ties: converged beats stalled, then lower index
  int best = 0;
  for (int i = 1; i < starts; ++i) {
    const StartResult& c = results[static_cast<std::size_t>(i)];
    const StartResult& b = results[static_cast<std::size_t>(best)];
    if (!std::isfinite(b.value)) {
      if (std::isfinite(c.value)) best = i;
      continue;
    }
    const double eps = 1e-11 * std::max(1.0, std::abs(b.value));
    if (c.value > b.value + eps || (c.value > b.value - eps && c.converged && !b.converged)) best = i;
  }
  const StartResult& r = results[static_cast<std::size_t>(best)];
  if (!std::isfinite(r.value)) throw DomainError("likelihood is not finite at any start point");

  ReconstructionResult out;
  const Vector4c y = kernels::unpack(r.x);
  out.estimate = fix_gauge(y);
  out.scale = y.squaredNorm();
  out.log_likelihood = r.value;
  Problem::Workspace ws(problem.size());
  out.residual = problem.residual(r.x, ws);
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.best_start = best;
  return out;
}

ReconstructionResult reconstruct(const RecordSet& records, const MlOptions& options,
                                 const std::optional<QuquartState>& reference) {
  validate(records);
  std::vector<std::string> warnings;
  QuquartState initial = random_pure_state(options.seed);
  if (records.protocol == Protocol::p1 && records.records.size() != 16) {
    if (distinct_settings(records) < 8) {
      throw ProtocolError("linear inversion requires the 16 Protocol 1 settings and maximum likelihood at least 8, got " +
                          std::to_string(records.records.size()) + " records");
    }
    warnings.push_back("linear inversion requires the 16 Protocol 1 settings, got " +
                       std::to_string(records.records.size()) + "; using maximum likelihood only");
  } else {
    double total = 0.0;
    for (const auto& r : records.records) total += r.counts;
    if (!(total > 0.0)) throw DomainError("all counts are zero; nothing to reconstruct");
    try {
      initial = principal_state(records.protocol == Protocol::p1 ? linear_invert_p1(records)
                                                                 : linear_invert(records));
    } catch (const ProtocolError& e) {
      if (records.protocol == Protocol::p1) throw;
      warnings.push_back(std::string(e.what()) + "; using maximum likelihood only");
    }
  }
  ReconstructionResult out = ml_refine(records, initial, options);
  out.warnings = std::move(warnings);
  if (!out.converged) out.warnings.push_back("maximum-likelihood search did not converge");
  if (reference) out.fidelity = fidelity(out.estimate, *reference);
  return out;
}

double log_likelihood(const RecordSet& records, const QuquartState& state) {
  validate(records);
  const Problem problem(records);
  Problem::Workspace ws(problem.size());
  return problem.value(problem.scaled(state, ws), ws);
}

}  // namespace ququart
