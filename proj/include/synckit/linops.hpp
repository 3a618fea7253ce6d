#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace synckit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Eigenvalues of a square matrix together with the spectral abscissa.
struct Spectrum {
  CVec eigenvalues;
  double abscissa = 0.0;  // max real part

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Similarity decomposition A = [U W] blkdiag(F, G) [U W]^{-1} where F carries
/// the eigenvalues on the imaginary axis (within tolerance) and G is Hurwitz.
struct CenterStableSplit {
  Mat center_basis;   // U, n x n1, orthonormal columns
  Mat stable_basis;   // W, n x n2, invariant complement (not orthonormal)
  Mat center_block;   // F, n1 x n1
  Mat stable_block;   // G, n2 x n2
  Mat center_left;    // U^+, n1 x n, left inverse rows
  Mat stable_left;    // W^+, n2 x n

  int center_dim() const { return static_cast<int>(center_block.rows()); }
  int stable_dim() const { return static_cast<int>(stable_block.rows()); }

  /// [U W] blkdiag(F, G) [U^+; W^+], for residual checks against A.
  Mat reassemble() const;
};

/// Real Schur form A = Z T Z^T reordered so the leading `selected` rows of T
/// carry exactly the eigenvalues accepted by the predicate.
struct OrderedSchur {
  Mat t;         // quasi upper triangular
  Mat z;         // orthogonal
  int selected;  // size of the leading invariant block
};

/// Default axis tolerance: 1e-8 * (1 + ||A||_F).
double default_eig_tol(const Mat& a);

Spectrum eig(const Mat& m);

/// e^{M t} by scaling-and-squaring (Pade); exact identity for t = 0.
Mat expm(const Mat& m, double t = 1.0);

bool is_hurwitz(const Mat& m, double margin = 0.0);

/// Kronecker product, row-major block layout.
Mat kron(const Mat& a, const Mat& b);

/// [[X, -Y], [Y, X]]; its spectrum is spec(X + iY) together with conjugates.
Mat real_embedding(const Mat& x, const Mat& y);

/// Spectral abscissa of the complex matrix A + lambda * M via real embedding.
double shifted_abscissa(const Mat& a, Complex lambda, const Mat& m);

/// Solves F Y - Y G = C for Y (spectra of F and G must be disjoint).
Mat solve_sylvester(const Mat& f, const Mat& g, const Mat& c);

/// Reorders the real Schur form of `a` so that eigenvalues accepted by
/// `select` come first. The predicate must be conjugation-symmetric.
OrderedSchur ordered_real_schur(const Mat& a,
                                const std::function<bool(Complex)>& select);

/// Splits a neutrally stable `a` into its imaginary-axis and Hurwitz parts.
/// Raises PreconditionError if an eigenvalue has real part above eig_tol and
/// IllConditionedSplitError if eigenvalues straddle the tolerance boundary.
CenterStableSplit split_center_stable(const Mat& a, double eig_tol);

/// Solves A P + P A^T + I - P C^T C P = 0 for the stabilizing P = P^T > 0
/// via the stable invariant subspace of the associated Hamiltonian matrix.
/// Raises NoStabilizingSolutionError when (C, A) is not detectable.
Mat solve_care(const Mat& c, const Mat& a, double residual_tol = 1e-8);

}  // namespace synckit
