#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pfm/frame.hpp"
#include "pfm/partition.hpp"
#include "pfm/sampling.hpp"

namespace pfm {

struct SpectralOptions {
  enum class Solver { Auto, Full, Lanczos };
  Solver solver = Solver::Auto;
  int full_threshold = 1200;  // Auto uses the full decomposition up to this n
  int lanczos_max_iter = 450;
  double lanczos_tol = 1e-10;        // residual tolerance for wanted eigenvectors
  double lanczos_value_tol = 1e-5;   // looser tolerance for value-only extras
};

// Magnitude-ordered eigen data of a normalized Laplacian. The full solver
// keeps the whole spectrum (needed by the spurious-eigenvalue diagnostics);
// the Lanczos solver keeps the converged extremal part.
struct SpectralEmbedding {
  int K = 0;
  Vector eigenvalues;   // ordered by decreasing |lambda|, positive first on ties
  Matrix Y;             // n x K orthonormal eigenvectors of L
  Matrix V;             // n x K rows D^{-1/2} Y (empty when no degrees given)
  Vector degrees;       // the degree vector used for V (empty otherwise)
  double sigma = 0.0;   // |lambda_K| - |lambda_{K+1}| (0 when unavailable)
  bool degenerate_gap = false;
  bool full_spectrum = false;
  Matrix all_vectors;   // full solver only: every eigenvector, magnitude order
};

// L = D^{-1/2} M D^{-1/2}; returns L and the degree vector.
std::pair<Matrix, Vector> normalized_laplacian(const Matrix& M);
std::pair<Matrix, Vector> normalized_laplacian(const SampledGraph& graph);

SpectralEmbedding top_k_eigen(const Matrix& L, int K, const Vector* degrees = nullptr,
                              const SpectralOptions& options = {});

// Max over communities of the max pairwise row distance of V inside the
// community. Zero (up to tol) on expected models.
double piecewise_constant_check(const Matrix& V, const Partition& partition);

struct DiagBlockSummary {
  int k;
  double lambda_max;
  double lambda2;  // second largest magnitude
  double ratio;    // |lambda2| / lambda_max
  bool trivial;    // width-1 or empty block
};

struct PairBlockSummary {
  int k, l;
  double lambda_max;  // sqrt of top singular value pair = lambda_max(M_kl)
  double lambda3;     // third largest magnitude of M_kl's spectrum
  double ratio;
  bool trivial;
};

struct BlockAnalysis {
  std::vector<DiagBlockSummary> diag;
  std::vector<PairBlockSummary> offdiag;
  double c = 0.0;                    // max homogeneity ratio over all blocks
  double max_frame_deviation = 0.0;  // vs r_kk and sqrt(r_kl r_lk)
  double max_pm_asymmetry = 0.0;     // worst |lambda + mirrored lambda| over checked pairs
};

// Block-level eigen analysis of an expected-model L against its frame.
// strict: throw FrameMismatch when the block identities deviate beyond tol.
BlockAnalysis block_analysis(const Matrix& L, const Partition& partition,
                             const PreferenceFrame& frame, double tol = 1e-8,
                             bool strict = true, int pm_check_limit = 512);

struct SpuriousCertificate {
  double max_spurious_abs;  // max_{j > K} |lambda_j|
  double bound;             // c * frame_factor
  double c;
  double frame_factor_value;
  bool holds;
};

// Theorem-6 certificate: spurious eigenvalues bounded by c times the frame
// factor. Requires a full-spectrum embedding.
SpuriousCertificate spurious_bound_certificate(const BlockAnalysis& analysis,
                                               const PreferenceFrame& frame,
                                               const SpectralEmbedding& spectrum,
                                               double tol = 1e-8,
                                               bool throw_on_violation = true);

// Max over spurious eigenvectors x and communities k of |x_k . s_k| / ||s_k||,
// with s = sqrt(degrees). Requires a full-spectrum embedding with degrees.
double spurious_orthogonality_check(const SpectralEmbedding& spectrum,
                                    const Partition& partition);

// Spectral norm of L1 - L2 (largest eigenvalue magnitude of the difference).
double spectral_norm_diff(const Matrix& L1, const Matrix& L2,
                          const SpectralOptions& options = {});

// Psi gamma^2 / sqrt(log n).
double concentration_rhs(double psi, double gamma, int n);

// min over orthogonal O of ||Y_hat - Y O||_F (orthogonal Procrustes).
double subspace_distance(const Matrix& Y, const Matrix& Y_hat);

// Deterministic Lanczos with full reorthogonalization for the extremal
// (largest-magnitude) part of a symmetric operator's spectrum.
struct LanczosResult {
  Vector values;   // top (want_vectors + want_values) by magnitude
  Matrix vectors;  // n x want_vectors Ritz vectors for the leading values
  int iterations = 0;
  bool converged = false;
};
LanczosResult lanczos_topk(const std::function<void(Vector&, const Vector&)>& op, int n,
                           int want_vectors, int want_values, const SpectralOptions& options = {});

}  // namespace pfm
