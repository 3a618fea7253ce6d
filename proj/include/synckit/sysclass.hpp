#pragma once

#include "synckit/linops.hpp"

#include <vector>

namespace synckit {

/// Output map C (m x n) and dynamics A (n x n).
struct SystemPair {
  Mat C;
  Mat A;

  SystemPair(Mat c, Mat a);

  int state_dim() const { return static_cast<int>(A.rows()); }
  int output_dim() const { return static_cast<int>(C.rows()); }
};

/// Rank evidence for one eigenvalue of A: the rank of [A - lambda I; C].
struct ModeEvidence {
  Complex lambda;
  int pbh_rank = 0;
  bool tested = false;  // only modes with Re >= -tol enter the detectability test
};

/// Membership of a pair in the nested stability / output classes, with the
/// numeric evidence backing each flag.
struct ClassReport {
  bool hurwitz = false;            // A strictly stable
  bool neutrally_stable = false;   // axis eigenvalues semisimple, none unstable
  bool no_unstable_modes = false;  // no eigenvalue with positive real part
  bool full_column_rank = false;   // C has rank n
  bool detectable = false;         // PBH holds at every closed-right-half mode

  CVec a_eigenvalues;
  std::vector<ModeEvidence> modes;
  int c_rank = 0;
  double eig_tol = 0.0;
  double rank_cutoff = 0.0;
};

/// Numerical rank with the cutoff max(rows, cols) * sigma_max * 1e-12.
int numerical_rank(const Mat& m);
int numerical_rank(const CMat& m);

/// PBH test: rank [A - lambda I; C] = n at every eigenvalue with
/// Re(lambda) >= -tol.
bool is_detectable(const SystemPair& pair, double tol);

/// No eigenvalue with Re > eig_tol, and every eigenvalue within eig_tol of
/// the axis is semisimple. Eigenvalues within eig_tol of each other are
/// clustered before multiplicities are counted. Raises IndeterminateError
/// when an eigenvalue sits on the tolerance boundary.
bool is_neutrally_stable(const Mat& a, double eig_tol);

ClassReport classify(const SystemPair& pair, double tol);

}  // namespace synckit
