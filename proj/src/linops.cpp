#include "synckit/linops.hpp"

#include "synckit/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace synckit {

namespace {

void require_square(const Mat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError(std::string(who) + ": matrix must be square, got " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(who) + ": matrix has non-finite entries");
  }
}

struct SchurBlock {
  int start = 0;
  int size = 1;  // 1 or 2
};

std::vector<SchurBlock> scan_blocks(const Mat& t) {
  std::vector<SchurBlock> blocks;
  const int n = static_cast<int>(t.rows());
  int i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      ++i;
    }
  }
  return blocks;
}

Complex block_eigenvalue(const Mat& t, const SchurBlock& b) {
  if (b.size == 1) return Complex(t(b.start, b.start), 0.0);
  const double t11 = t(b.start, b.start);
  const double t12 = t(b.start, b.start + 1);
  const double t21 = t(b.start + 1, b.start);
  const double t22 = t(b.start + 1, b.start + 1);
  const double mean = 0.5 * (t11 + t22);
  const double disc = 0.25 * (t11 - t22) * (t11 - t22) + t12 * t21;
  if (disc >= 0.0) return Complex(mean + std::sqrt(disc), 0.0);
  return Complex(mean, std::sqrt(-disc));
}

// Applies the orthogonal window transform Q (w x w, acting on rows/cols
// [i, i+w)) as a similarity on T and accumulates it into Z.
void apply_window(Mat& t, Mat& z, int i, const Mat& q) {
  const int n = static_cast<int>(t.rows());
  const int w = static_cast<int>(q.rows());
  t.block(i, i, w, n - i) = (q.transpose() * t.block(i, i, w, n - i)).eval();
  t.block(0, i, i + w, w) = (t.block(0, i, i + w, w) * q).eval();
  z.block(0, i, n, w) = (z.block(0, i, n, w) * q).eval();
}

// Brings a 2x2 diagonal block back to standard quasi-triangular form
// (Eigen splits it into two 1x1 blocks when the eigenvalues are real).
void restandardize(Mat& t, Mat& z, int start) {
  Mat b = t.block(start, start, 2, 2);
  Eigen::RealSchur<Mat> schur(b);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("schur: 2x2 restandardization failed");
  }
  apply_window(t, z, start, schur.matrixU());
  t.block(start, start, 2, 2) = schur.matrixT();
}

// Exchanges the adjacent diagonal blocks (i, p) and (i+p, q) via the
// invariant-subspace construction: solve A11 S - S A22 = -A12, then rotate
// the window so the columns of [S; I] lead.
void swap_adjacent_blocks(Mat& t, Mat& z, int i, int p, int q) {
  const Mat a11 = t.block(i, i, p, p);
  const Mat a22 = t.block(i + p, i + p, q, q);
  const Mat a12 = t.block(i, i + p, p, q);

  const Mat s = solve_sylvester(a11, a22, -a12);
  Mat v(p + q, q);
  v.topRows(p) = s;
  v.bottomRows(q) = Mat::Identity(q, q);

  Eigen::HouseholderQR<Mat> qr(v);
  const Mat full_q = qr.householderQ();
  apply_window(t, z, i, full_q);
  t.block(i + q, i, p, q).setZero();

  if (q == 2) restandardize(t, z, i);
  if (p == 2) restandardize(t, z, i + q);
}

}  // namespace

double default_eig_tol(const Mat& a) { return 1e-8 * (1.0 + a.norm()); }

Mat CenterStableSplit::reassemble() const {
  const int n = static_cast<int>(center_basis.rows() > 0 ? center_basis.rows()
                                                         : stable_basis.rows());
  Mat out = Mat::Zero(n, n);
  if (center_dim() > 0) out += center_basis * center_block * center_left;
  if (stable_dim() > 0) out += stable_basis * stable_block * stable_left;
  return out;
}

Spectrum eig(const Mat& m) {
  require_square(m, "eig");
  Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig: QR iteration did not converge");
  }
  Spectrum out;
  out.eigenvalues = solver.eigenvalues();
  out.abscissa = out.eigenvalues.real().maxCoeff();
  return out;
}

Mat expm(const Mat& m, double t) {
  require_square(m, "expm");
  if (t == 0.0) return Mat::Identity(m.rows(), m.cols());
  Mat out = (m * t).exp();
  if (!out.allFinite()) {
    throw NumericalError("expm: overflow for ||M t|| = " +
                         std::to_string((m * t).norm()));
  }
  return out;
}

bool is_hurwitz(const Mat& m, double margin) {
  return eig(m).abscissa < -margin;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat real_embedding(const Mat& x, const Mat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("real_embedding: real and imaginary parts differ in shape");
  }
  const Eigen::Index n = x.rows(), m = x.cols();
  Mat out(2 * n, 2 * m);
  out.topLeftCorner(n, m) = x;
  out.topRightCorner(n, m) = -y;
  out.bottomLeftCorner(n, m) = y;
  out.bottomRightCorner(n, m) = x;
  return out;
}

double shifted_abscissa(const Mat& a, Complex lambda, const Mat& m) {
  if (a.rows() != m.rows() || a.cols() != m.cols()) {
    throw DimensionError("shifted_abscissa: A and M must have equal shape");
  }
  if (lambda.imag() == 0.0) {
    return eig(a + lambda.real() * m).abscissa;
  }
  return eig(real_embedding(a + lambda.real() * m, lambda.imag() * m)).abscissa;
}

Mat solve_sylvester(const Mat& f, const Mat& g, const Mat& c) {
  const int p = static_cast<int>(f.rows());
  const int q = static_cast<int>(g.rows());
  if (f.cols() != p || g.cols() != q || c.rows() != p || c.cols() != q) {
    throw DimensionError("solve_sylvester: incompatible shapes");
  }
  if (p == 0 || q == 0) return Mat(p, q);
  Mat k = kron(Mat::Identity(q, q), f) - kron(g.transpose(), Mat::Identity(p, p));
  Eigen::FullPivLU<Mat> lu(k);
  if (!lu.isInvertible()) {
    throw IllConditionedSplitError(
        "solve_sylvester: spectra of the two blocks overlap");
  }
  Eigen::Map<const Vec> rhs(c.data(), p * q);
  Vec y = lu.solve(rhs);
  return Eigen::Map<const Mat>(y.data(), p, q);
}

OrderedSchur ordered_real_schur(const Mat& a,
                                const std::function<bool(Complex)>& select) {
  require_square(a, "ordered_real_schur");
  const int n = static_cast<int>(a.rows());

  Eigen::RealSchur<Mat> schur(a);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("ordered_real_schur: Schur iteration did not converge");
  }
  Mat t = schur.matrixT();
  Mat z = schur.matrixU();

  // Bubble selected blocks to the top. Rescanning after every swap keeps the
  // block bookkeeping trivial; the matrices here are small.
  const int max_sweeps = n * n + 16;
  int sweeps = 0;
  for (;;) {
    if (++sweeps > max_sweeps) {
      throw IllConditionedSplitError(
          "ordered_real_schur: reordering did not settle (eigenvalues on the "
          "selection boundary)");
    }
    const auto blocks = scan_blocks(t);
    int bad = -1;
    for (int i = 0; i + 1 < static_cast<int>(blocks.size()); ++i) {
      if (!select(block_eigenvalue(t, blocks[i])) &&
          select(block_eigenvalue(t, blocks[i + 1]))) {
        bad = i;
        break;
      }
    }
    if (bad < 0) break;
    swap_adjacent_blocks(t, z, blocks[bad].start, blocks[bad].size,
                         blocks[bad + 1].size);
  }

  int selected = 0;
  for (const auto& b : scan_blocks(t)) {
    if (select(block_eigenvalue(t, b))) selected += b.size;
  }

  const double residual = (z * t * z.transpose() - a).norm();
  if (residual > 1e-10 * n * (1.0 + a.norm())) {
    throw NumericalError("ordered_real_schur: reordering residual " +
                         std::to_string(residual) + " too large");
  }
  return {std::move(t), std::move(z), selected};
}

CenterStableSplit split_center_stable(const Mat& a, double eig_tol) {
  require_square(a, "split_center_stable");
  if (eig_tol <= 0.0) {
    throw ValidationError("split_center_stable: eig_tol must be positive");
  }
  const int n = static_cast<int>(a.rows());

  const Spectrum sp = eig(a);
  for (int i = 0; i < sp.size(); ++i) {
    const double re = sp.eigenvalues[i].real();
    if (re > eig_tol) {
      throw PreconditionError(
          "split_center_stable: eigenvalue with positive real part " +
          std::to_string(re));
    }
    if (std::abs(std::abs(re) - eig_tol) < 0.5 * eig_tol) {
      throw IllConditionedSplitError(
          "split_center_stable: eigenvalue real part " + std::to_string(re) +
          " straddles the axis tolerance " + std::to_string(eig_tol));
    }
  }

  OrderedSchur os = ordered_real_schur(
      a, [eig_tol](Complex l) { return std::abs(l.real()) <= eig_tol; });
  const int k = os.selected;
  const int n2 = n - k;

  CenterStableSplit split;
  split.center_block = os.t.topLeftCorner(k, k);
  split.stable_block = os.t.bottomRightCorner(n2, n2);
  const Mat z1 = os.z.leftCols(k);
  const Mat z2 = os.z.rightCols(n2);
  split.center_basis = z1;
  if (k > 0 && n2 > 0) {
    const Mat coupling = os.t.topRightCorner(k, n2);
    const Mat y = solve_sylvester(split.center_block, split.stable_block,
                                  -coupling);
    split.stable_basis = z1 * y + z2;
    split.center_left = z1.transpose() - y * z2.transpose();
  } else {
    split.stable_basis = z2;
    split.center_left = z1.transpose();
  }
  split.stable_left = z2.transpose();

  const double residual = (split.reassemble() - a).norm();
  if (residual > 1e-8 * n * (1.0 + a.norm())) {
    throw NumericalError("split_center_stable: decoupling residual " +
                         std::to_string(residual) + " too large");
  }
  return split;
}

Mat solve_care(const Mat& c, const Mat& a, double residual_tol) {
  require_square(a, "solve_care");
  const int n = static_cast<int>(a.rows());
  if (c.cols() != n || c.rows() < 1) {
    throw DimensionError("solve_care: C must have as many columns as A");
  }
  if (!c.allFinite()) {
    throw ValidationError("solve_care: C has non-finite entries");
  }

  const Mat ctc = c.transpose() * c;
  Mat ham(2 * n, 2 * n);
  ham.topLeftCorner(n, n) = a.transpose();
  ham.topRightCorner(n, n) = -ctc;
  ham.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  ham.bottomRightCorner(n, n) = -a;

  const double axis_tol = 1e-8 * (1.0 + ham.norm());
  const Spectrum hs = eig(ham);
  for (int i = 0; i < hs.size(); ++i) {
    if (std::abs(hs.eigenvalues[i].real()) < axis_tol) {
      throw NoStabilizingSolutionError(
          "solve_care: Hamiltonian eigenvalue on the imaginary axis; pair is "
          "not detectable");
    }
  }

  OrderedSchur os =
      ordered_real_schur(ham, [](Complex l) { return l.real() < 0.0; });
  if (os.selected != n) {
    throw NoStabilizingSolutionError(
        "solve_care: stable Hamiltonian subspace has dimension " +
        std::to_string(os.selected) + ", expected " + std::to_string(n));
  }

  const Mat x1 = os.z.topLeftCorner(n, n);
  const Mat x2 = os.z.bottomLeftCorner(n, n);
  Eigen::FullPivLU<Mat> lu(x1.transpose());
  if (!lu.isInvertible()) {
    throw NoStabilizingSolutionError(
        "solve_care: stable subspace is not a graph over the state space");
  }
  Mat p = lu.solve(x2.transpose()).transpose();
  p = 0.5 * (p + p.transpose()).eval();

  // Newton refinement: the subspace extraction loses accuracy when the
  // stable subspace is nearly vertical (weakly observed modes make P large
  // and X1 ill-conditioned). Each step solves the Lyapunov equation
  // (A - P C^T C) Q + Q (A - P C^T C)^T = -(I + P C^T C P).
  const auto residual_of = [&](const Mat& q) {
    return (a * q + q * a.transpose() + Mat::Identity(n, n) - q * ctc * q).norm();
  };
  double residual = residual_of(p);
  for (int iter = 0;
       iter < 25 && residual > 0.01 * residual_tol * std::max(1.0, p.norm());
       ++iter) {
    const Mat acl = a - p * ctc;
    if (!is_hurwitz(acl)) break;
    Mat next;
    try {
      next = solve_sylvester(acl, -acl.transpose(),
                             -(Mat::Identity(n, n) + p * ctc * p));
    } catch (const IllConditionedSplitError&) {
      break;
    }
    next = 0.5 * (next + next.transpose()).eval();
    const double next_residual = residual_of(next);
    if (next_residual >= residual) break;
    p = next;
    residual = next_residual;
  }

  if (residual > residual_tol * std::max(1.0, p.norm())) {
    throw NumericalError("solve_care: residual " + std::to_string(residual) +
                         " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Mat> pe(p);
  if (pe.info() != Eigen::Success || pe.eigenvalues().minCoeff() <= 0.0) {
    throw NoStabilizingSolutionError("solve_care: solution is not positive definite");
  }
  if (!is_hurwitz(a - p * ctc)) {
    throw NumericalError("solve_care: closed-loop matrix is not Hurwitz");
  }
  return p;
}

}  // namespace synckit
