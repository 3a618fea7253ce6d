#include "synckit/sysclass.hpp"

#include "synckit/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace synckit {

namespace {

double rank_cutoff_for(double sigma_max, Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * 1e-12;
}

template <typename MatrixType>
int rank_of(const MatrixType& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<MatrixType> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_cutoff_for(sv(0), m.rows(), m.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

CMat pbh_matrix(const SystemPair& pair, Complex lambda) {
  const int n = pair.state_dim();
  const int m = pair.output_dim();
  CMat out(n + m, n);
  out.topRows(n) =
      pair.A.cast<Complex>() - lambda * CMat::Identity(n, n);
  out.bottomRows(m) = pair.C.cast<Complex>();
  return out;
}

// Groups eigenvalues pairwise closer than `radius` into clusters.
std::vector<std::vector<int>> cluster_eigenvalues(const CVec& eigs,
                                                  double radius) {
  const int n = static_cast<int>(eigs.size());
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = static_cast<int>(clusters.size());
    clusters.push_back({i});
    // flood fill: anything within radius of a member joins
    for (size_t k = 0; k < clusters.back().size(); ++k) {
      const int a = clusters.back()[k];
      for (int j = 0; j < n; ++j) {
        if (label[j] < 0 && std::abs(eigs[a] - eigs[j]) <= radius) {
          label[j] = label[i];
          clusters.back().push_back(j);
        }
      }
    }
  }
  return clusters;
}

}  // namespace

SystemPair::SystemPair(Mat c, Mat a) : C(std::move(c)), A(std::move(a)) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DimensionError("system pair: A must be square");
  }
  if (C.cols() != A.cols() || C.rows() < 1) {
    throw DimensionError("system pair: C must have as many columns as A");
  }
  if (!A.allFinite() || !C.allFinite()) {
    throw ValidationError("system pair: matrices must be finite");
  }
}

int numerical_rank(const Mat& m) { return rank_of(m); }
int numerical_rank(const CMat& m) { return rank_of(m); }

bool is_detectable(const SystemPair& pair, double tol) {
  const int n = pair.state_dim();
  const Spectrum sp = eig(pair.A);
  for (int i = 0; i < sp.size(); ++i) {
    const Complex lambda = sp.eigenvalues[i];
    if (lambda.real() < -tol) continue;
    if (numerical_rank(pbh_matrix(pair, lambda)) < n) return false;
  }
  return true;
}

bool is_neutrally_stable(const Mat& a, double eig_tol) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionError("is_neutrally_stable: matrix must be square");
  }
  if (eig_tol <= 0.0) {
    throw ValidationError("is_neutrally_stable: eig_tol must be positive");
  }
  const int n = static_cast<int>(a.rows());
  const Spectrum sp = eig(a);

  for (int i = 0; i < n; ++i) {
    const double re = sp.eigenvalues[i].real();
    if (std::abs(std::abs(re) - eig_tol) < 0.5 * eig_tol) {
      throw IndeterminateError(
          "is_neutrally_stable: eigenvalue real part " + std::to_string(re) +
          " sits on the axis-tolerance boundary " + std::to_string(eig_tol));
    }
  }
  if (sp.abscissa > eig_tol) return false;

  const auto clusters = cluster_eigenvalues(sp.eigenvalues, eig_tol);
  for (const auto& cluster : clusters) {
    Complex mean(0.0, 0.0);
    for (int idx : cluster) mean += sp.eigenvalues[idx];
    mean /= static_cast<double>(cluster.size());
    if (std::abs(mean.real()) > eig_tol) continue;  // stable cluster

    const int algebraic = static_cast<int>(cluster.size());
    const CMat shifted =
        a.cast<Complex>() - mean * CMat::Identity(n, n);
    const int geometric = n - numerical_rank(shifted);
    if (geometric < algebraic) return false;
  }
  return true;
}

ClassReport classify(const SystemPair& pair, double tol) {
  if (tol <= 0.0) {
    throw ValidationError("classify: tolerance must be positive");
  }
  const int n = pair.state_dim();
  ClassReport report;
  report.eig_tol = tol;

  const Spectrum sp = eig(pair.A);
  report.a_eigenvalues = sp.eigenvalues;

  report.hurwitz = sp.abscissa < -tol;
  report.no_unstable_modes = sp.abscissa <= tol;
  report.neutrally_stable = is_neutrally_stable(pair.A, tol);

  Eigen::JacobiSVD<Mat> csvd(pair.C);
  const double sigma_max = csvd.singularValues()(0);
  report.rank_cutoff = rank_cutoff_for(sigma_max, pair.C.rows(), pair.C.cols());
  report.c_rank = numerical_rank(pair.C);
  report.full_column_rank = report.c_rank == n;

  report.detectable = true;
  for (int i = 0; i < sp.size(); ++i) {
    ModeEvidence ev;
    ev.lambda = sp.eigenvalues[i];
    ev.tested = ev.lambda.real() >= -tol;
    ev.pbh_rank = numerical_rank(pbh_matrix(pair, ev.lambda));
    if (ev.tested && ev.pbh_rank < n) report.detectable = false;
    report.modes.push_back(ev);
  }
  return report;
}

}  // namespace synckit
