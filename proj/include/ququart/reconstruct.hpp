#pragma once

// Pure-state estimation from coincidence records.
//
// The model for record nu is mu_nu = s_nu |w_nu . y|^2 with y in C^4 and
// s_nu = exposure_nu / mean exposure, so |y|^2 is the fitted brightness times
// the mean exposure. The Poisson log-likelihood
//   L(y) = sum_nu n_nu log mu_nu - mu_nu
// is maximized over the 8 real components of y by a damped Newton iteration
// whose Hessian is made positive definite through its eigenvalues. The global
// phase of y is a flat direction and is fixed afterwards.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ququart/state.hpp"
#include "ququart/tomography.hpp"

namespace ququart {

struct ReconstructionResult {
  QuquartState estimate = states::vv();
  double scale = 0.0;
  double log_likelihood = 0.0;
  double residual = 0.0;  // sum (n - mu)^2 / max(mu, 1) / (N - 8)
  int iterations = 0;
  bool converged = false;
  int best_start = 0;
  std::optional<double> fidelity;  // against a supplied reference
  std::vector<std::string> warnings;
};

struct MlOptions {
  int multistarts = 8;
  double tolerance = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 0;
  /// Worker threads for the multi-starts; 0 picks hardware concurrency.
  int threads = 0;
};

/// Nearest Hermitian PSD matrix by eigenvalue clipping, trace renormalized to 1.
/// Throws DomainError when nothing positive remains.
CoherenceMatrix4 project_psd(const Matrix4c& k);

/// Ratio of extreme singular values of the N x 16 moment design.
double design_condition(const std::vector<Vector4c>& rows);

/// Solves the 16 x 16 moment system of a Protocol 1 record set, then projects
/// to a PSD matrix of unit trace. Throws ProtocolError unless there are exactly
/// 16 Protocol 1 records with a non-singular design.
CoherenceMatrix4 linear_invert_p1(const RecordSet& records);

/// Least-squares moment fit for any record set whose design has rank 16.
CoherenceMatrix4 linear_invert(const RecordSet& records);

/// The pure state whose moment matrix is closest to k: the conjugated
/// principal eigenvector, since K_ij = c_i* c_j.
QuquartState principal_state(const CoherenceMatrix4& k);

/// Local search from `initial` plus options.multistarts random starts; the
/// best likelihood wins, ties to the lowest start index (initial is 0).
/// Throws ProtocolError with fewer than 8 distinct settings, DomainError when
/// every count is zero.
ReconstructionResult ml_refine(const RecordSet& records, const QuquartState& initial,
                               const MlOptions& options = {});

/// P1: linear inversion warm start, or ML-only with a warning when fewer than
/// 16 records are present. P2: least-squares warm start when the design has
/// rank 16. Fidelity is filled in when a reference is given.
ReconstructionResult reconstruct(const RecordSet& records, const MlOptions& options = {},
                                 const std::optional<QuquartState>& reference = std::nullopt);

/// Poisson log-likelihood (without the log n! term) of a state at its
/// best-fitting scale.
double log_likelihood(const RecordSet& records, const QuquartState& state);

}  // namespace ququart
