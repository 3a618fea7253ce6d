#include "synckit/interconnect.hpp"

#include "synckit/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <vector>

namespace synckit {

namespace {

// Diagonal entries are derived, never stored: row i gets the negated sum of
// its off-diagonal weights, so the row sum cancels exactly in floating point.
void set_diagonal_from_offdiag(Mat& gamma) {
  const int p = static_cast<int>(gamma.rows());
  for (int i = 0; i < p; ++i) {
    double sum = 0.0;
    for (int j = 0; j < p; ++j) {
      if (j != i) sum += gamma(i, j);
    }
    gamma(i, i) = -sum;
  }
}

}  // namespace

Interconnection Interconnection::from_weighted_edges(
    int node_count, const std::vector<WeightedEdge>& edges) {
  if (node_count < 1) {
    throw ValidationError("interconnection: node count must be at least 1");
  }
  Mat gamma = Mat::Zero(node_count, node_count);
  for (const auto& e : edges) {
    if (e.from < 1 || e.from > node_count || e.to < 1 || e.to > node_count) {
      throw ValidationError("interconnection: edge (" + std::to_string(e.from) +
                            ", " + std::to_string(e.to) +
                            ") is out of range for p = " +
                            std::to_string(node_count));
    }
    if (e.from == e.to) {
      throw ValidationError("interconnection: self-loop at node " +
                            std::to_string(e.from));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("interconnection: edge weight must be positive and finite");
    }
    // repeated edges between the same ordered pair accumulate
    gamma(e.from - 1, e.to - 1) += e.weight;
  }
  set_diagonal_from_offdiag(gamma);
  return Interconnection(std::move(gamma));
}

Interconnection Interconnection::from_matrix(const Mat& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() < 1) {
    throw ValidationError("interconnection: matrix must be square");
  }
  if (!gamma.allFinite()) {
    throw ValidationError("interconnection: matrix has non-finite entries");
  }
  const int p = static_cast<int>(gamma.rows());
  const double scale = 1.0 + gamma.cwiseAbs().maxCoeff();
  Mat out = gamma;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      if (out(i, j) < 0.0) {
        throw ValidationError("interconnection: negative off-diagonal entry at (" +
                              std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                              ")");
      }
    }
    if (std::abs(gamma.row(i).sum()) > 1e-9 * scale) {
      throw ValidationError("interconnection: row " + std::to_string(i + 1) +
                            " does not sum to zero");
    }
  }
  set_diagonal_from_offdiag(out);
  return Interconnection(std::move(out));
}

Interconnection Interconnection::ring(int node_count) {
  if (node_count < 2) {
    throw ValidationError("ring: need at least 2 nodes");
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(node_count);
  for (int i = 1; i <= node_count; ++i) {
    edges.push_back({i, i % node_count + 1, 1.0});
  }
  return from_weighted_edges(node_count, edges);
}

std::vector<WeightedEdge> Interconnection::edges() const {
  std::vector<WeightedEdge> out;
  const int p = node_count();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i != j && gamma_(i, j) > 0.0) {
        out.push_back({i + 1, j + 1, gamma_(i, j)});
      }
    }
  }
  return out;
}

bool Interconnection::is_connected() const {
  const int p = node_count();
  if (p == 1) return true;
  // candidate sink: a node reachable from every other node; search the
  // reversed graph from each candidate
  std::vector<std::vector<int>> reversed(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i != j && gamma_(i, j) > 0.0) reversed[j].push_back(i);
    }
  }
  for (int cand = 0; cand < p; ++cand) {
    std::vector<char> seen(p, 0);
    std::vector<int> stack{cand};
    seen[cand] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : reversed[v]) {
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
    if (count == p) return true;
  }
  return false;
}

double GammaSpectrum::lambda2_re() const {
  if (!lambda2_re_.has_value()) {
    throw DegenerateSpectrumError(
        "spectrum: zero eigenvalue is not simple; the coupling rate is "
        "undefined for a disconnected interconnection");
  }
  return *lambda2_re_;
}

const Vec& GammaSpectrum::left_vector() const {
  if (!left_vector_.has_value()) {
    throw DegenerateSpectrumError(
        "spectrum: zero eigenvalue is not simple; the left null vector is "
        "not unique for a disconnected interconnection");
  }
  return *left_vector_;
}

GammaSpectrum spectrum(const Interconnection& g) {
  const Mat& gamma = g.gamma();
  const int p = g.node_count();
  const Spectrum sp = eig(gamma);
  const double zero_tol = 1e-9 * (1.0 + gamma.norm());

  int zero_count = 0;
  std::optional<double> lambda2;
  for (int i = 0; i < p; ++i) {
    const Complex l = sp.eigenvalues[i];
    if (std::abs(l) <= zero_tol) {
      ++zero_count;
      continue;
    }
    if (!lambda2 || std::abs(l.real()) < std::abs(*lambda2)) {
      lambda2 = l.real();
    }
  }

  if (zero_count != 1) {
    // non-simple zero: expose eigenvalues only
    return GammaSpectrum(sp.eigenvalues, false, std::nullopt, std::nullopt,
                         zero_tol);
  }

  std::optional<Vec> left;
  if (p == 1) {
    left = Vec::Ones(1);
  } else {
    Eigen::JacobiSVD<Mat> svd(gamma.transpose(), Eigen::ComputeFullV);
    Vec r = svd.matrixV().col(p - 1);
    const double mass = r.sum();
    if (std::abs(mass) < 1e-12) {
      throw NumericalError("spectrum: left null vector has zero total mass");
    }
    r /= mass;
    if ((r.transpose() * gamma).norm() > 1e-8 * (1.0 + gamma.norm())) {
      throw NumericalError("spectrum: left null vector residual too large");
    }
    left = r;
  }
  return GammaSpectrum(sp.eigenvalues, true, lambda2, left, zero_tol);
}

SetMembership membership(const Interconnection& g, double delta) {
  if (delta < 0.0 || !std::isfinite(delta)) {
    throw ValidationError("membership: delta must be nonnegative and finite");
  }
  SetMembership out;
  out.in_all = true;  // construction already enforces the defining inequalities
  out.in_connected = g.is_connected();
  if (out.in_connected) {
    const GammaSpectrum sp = spectrum(g);
    out.in_min_coupling = sp.zero_simple() && g.node_count() > 1 &&
                          std::abs(sp.lambda2_re()) >= delta;
  }
  return out;
}

}  // namespace synckit
