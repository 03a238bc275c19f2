#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pfm/errors.hpp"

namespace pfm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct FrameOptions {
  bool row_normalize = true;
  double tol_stoch = 1e-12;      // row-sum tolerance after normalization
  double tol_stoch_raw = 2e-2;   // accepted row-sum deviation before normalization
  double tol_rev = 1e-8;         // detailed-balance tolerance
  double tol_sing = 1e-10;       // singularity and eigenvalue-1 gap tolerance
  double tol_eig = 1e-8;         // stationarity / eigen residual tolerance
  bool reversibility_hard_fail = true;  // false: record the violation, keep going
  double normalize_warn = 1e-9;  // warn when normalization moved a row sum more than this
};

// Macro-level community graph: a reversible, nonsingular stochastic matrix R
// with its stationary distribution and real eigenstructure.
struct PreferenceFrame {
  int K = 0;
  Matrix R;            // row-stochastic
  Vector rho;          // stationary distribution, rho^T R = rho^T, sums to 1
  Vector eigenvalues;  // ordered by decreasing |lambda|, positive first on ties
  Matrix eigenvectors;  // right eigenvectors of R, one per column, unit norm

  double reversibility_residual = 0.0;  // max |rho_k R_kl - rho_l R_lk|
  double normalization_shift = 0.0;     // max |row sum - 1| before normalization
  double eigen_residual = 0.0;          // max |R U - U Lambda|
  bool reversibility_warned = false;
  std::vector<std::string> warnings;

  // Construction without validation, for diagnostics on degenerate inputs.
  static PreferenceFrame unchecked(const Matrix& R, const Vector& rho);
};

// Stationary distribution of a row-stochastic matrix (direct linear solve).
// Throws DisconnectedFrame when eigenvalue 1 is not simple.
Vector stationary_distribution(const Matrix& R, double tol_sing = 1e-10);

PreferenceFrame build_preference_frame(const Matrix& R_raw, const FrameOptions& options = {});

// max_k ( r_kk + sum_{l != k} sqrt(r_kl r_lk) ): the frame-dependent factor in
// the spurious-eigenvalue bound.
double frame_factor(const PreferenceFrame& frame);

// Order eigenvalues by decreasing magnitude, positive before negative on equal
// magnitude. Returns the permutation.
std::vector<int> magnitude_order(const Vector& values);

// JSON round trip. Only R and the options travel; rho and the eigenstructure
// are recomputed on load.
nlohmann::json frame_to_json(const PreferenceFrame& frame, bool row_normalize = true);
PreferenceFrame frame_from_json(const nlohmann::json& doc);

}  // namespace pfm
