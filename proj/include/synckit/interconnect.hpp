#pragma once

#include "synckit/linops.hpp"

#include <optional>
#include <vector>

namespace synckit {

/// Directed weighted edge, 1-based node indices.
struct WeightedEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

/// Coupling matrix with nonnegative off-diagonal entries and zero row sums.
/// The diagonal is always recomputed from the off-diagonal weights, so
/// gamma() * ones == 0 holds exactly.
class Interconnection {
 public:
  static Interconnection from_weighted_edges(int node_count,
                                             const std::vector<WeightedEdge>& edges);
  static Interconnection from_matrix(const Mat& gamma);
  /// Directed cycle 1 -> 2 -> ... -> p -> 1 with unit weights; its nonzero
  /// eigenvalues are e^{j 2 pi k / p} - 1.
  static Interconnection ring(int node_count);

  int node_count() const { return static_cast<int>(gamma_.rows()); }
  const Mat& gamma() const { return gamma_; }

  /// Edge list (i, j, w) for every positive off-diagonal weight.
  std::vector<WeightedEdge> edges() const;

  /// True iff some node is reachable by a directed path from every other
  /// node; decided by graph reachability, not spectra.
  bool is_connected() const;

 private:
  explicit Interconnection(Mat gamma) : gamma_(std::move(gamma)) {}
  Mat gamma_;
};

/// Spectral data of a coupling matrix. The coupling-rate field and the left
/// null vector exist only when the zero eigenvalue is simple; accessing them
/// otherwise raises DegenerateSpectrumError.
class GammaSpectrum {
 public:
  GammaSpectrum(CVec eigenvalues, bool zero_simple,
                std::optional<double> lambda2_re, std::optional<Vec> left_vector,
                double zero_tol)
      : eigenvalues_(std::move(eigenvalues)),
        zero_simple_(zero_simple),
        lambda2_re_(lambda2_re),
        left_vector_(std::move(left_vector)),
        zero_tol_(zero_tol) {}

  const CVec& eigenvalues() const { return eigenvalues_; }
  bool zero_simple() const { return zero_simple_; }
  double zero_tol() const { return zero_tol_; }

  /// Real part of a nonzero eigenvalue closest to the imaginary axis.
  double lambda2_re() const;
  /// r with r^T Gamma = 0 and r^T 1 = 1.
  const Vec& left_vector() const;

 private:
  CVec eigenvalues_;
  bool zero_simple_;
  std::optional<double> lambda2_re_;
  std::optional<Vec> left_vector_;
  double zero_tol_;
};

GammaSpectrum spectrum(const Interconnection& g);

/// Membership of Gamma in the nested interconnection families: every valid
/// coupling matrix, the connected ones, and the connected ones whose
/// coupling rate |Re lambda2| is at least delta.
struct SetMembership {
  bool in_all = false;
  bool in_connected = false;
  bool in_min_coupling = false;
};

SetMembership membership(const Interconnection& g, double delta);

}  // namespace synckit
