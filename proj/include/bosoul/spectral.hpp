#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "bosoul/graph.hpp"

namespace bosoul {

enum class LaplacianKind { Combinatorial, Normalized };

/// Eigendecomposition L = U Λ Uᵀ of a graph Laplacian, stored as the graph
/// Fourier operator Uᵀ (row i is the eigenvector of the i-th smallest
/// eigenvalue). Each row is signed so its first nonzero coordinate is
/// positive.
class SpectralBasis {
 public:
  SpectralBasis() = default;
  SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd fourier_operator, std::uint64_t fingerprint)
      : eigenvalues_(std::move(eigenvalues)),
        fourier_(std::move(fourier_operator)),
        fingerprint_(fingerprint) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& fourier_operator() const noexcept { return fourier_; }
  std::uint64_t graph_fingerprint() const noexcept { return fingerprint_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd fourier_;
  std::uint64_t fingerprint_ = 0;
};

inline Eigen::MatrixXd laplacian_matrix(const Graph& g, LaplacianKind kind = LaplacianKind::Combinatorial) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  if (kind == LaplacianKind::Combinatorial) {
    for (const Edge& e : g.edges()) {
      L(e.u, e.v) = L(e.v, e.u) = -1.0;
      L(e.u, e.u) += 1.0;
      L(e.v, e.v) += 1.0;
    }
    return L;
  }
  // I - D^{-1/2} A D^{-1/2}; isolated nodes get a zero row.
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) > 0) L(v, v) = 1.0;
  }
  for (const Edge& e : g.edges()) {
    const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(e.u) * g.degree(e.v)));
    L(e.u, e.v) = L(e.v, e.u) = -w;
  }
  return L;
}

namespace detail {

inline void fix_row_signs(Eigen::MatrixXd& rows, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (std::abs(rows(i, j)) > tol) {
        if (rows(i, j) < 0) rows.row(i) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace detail

/// Dense symmetric eigendecomposition of the graph Laplacian, O(N³).
inline SpectralBasis build_basis(const Graph& g, LaplacianKind kind = LaplacianKind::Combinatorial) {
  if (g.num_nodes() == 0) throw Error("cannot build a spectral basis of an empty graph");
  if (!is_connected(g)) {
    std::clog << "warning: building spectral basis of a disconnected graph\n";
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_matrix(g, kind));
  if (solver.info() != Eigen::Success) throw NumericError("Laplacian eigendecomposition failed");
  Eigen::MatrixXd fourier = solver.eigenvectors().transpose();
  detail::fix_row_signs(fourier);
  // Rounding can leave the zero eigenvalue slightly negative.
  Eigen::VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0);
  return SpectralBasis(std::move(eigenvalues), std::move(fourier), g.fingerprint());
}

struct SpectralSignal {
  Eigen::VectorXd coefficients;
  std::size_t truncated_to = 0;  // equals N when untruncated
};

/// s̃ = Uᵀs, optionally keeping only the `truncate_to` lowest-frequency
/// coefficients.
inline SpectralSignal fourier_transform(const SpectralBasis& basis, std::span<const std::uint8_t> indicator,
                                        std::optional<std::size_t> truncate_to = std::nullopt) {
  const std::size_t n = basis.size();
  if (indicator.size() != n) {
    throw Error("indicator length " + std::to_string(indicator.size()) + " does not match basis size " +
                std::to_string(n));
  }
  const std::size_t m = truncate_to.value_or(n);
  if (m > n) throw Error("truncation exceeds basis size");
  SpectralSignal out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)), m};
  const auto& U_t = basis.fourier_operator();
  for (std::size_t v = 0; v < n; ++v) {
    if (indicator[v]) out.coefficients += U_t.col(static_cast<Eigen::Index>(v)).head(static_cast<Eigen::Index>(m));
  }
  return out;
}

inline SpectralSignal fourier_transform(const SpectralBasis& basis, const NodeSet& s,
                                        std::optional<std::size_t> truncate_to = std::nullopt) {
  if (s.universe() != basis.size()) throw Error("node set universe does not match basis size");
  const std::size_t m = truncate_to.value_or(basis.size());
  if (m > basis.size()) throw Error("truncation exceeds basis size");
  SpectralSignal out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)), m};
  for (NodeId v : s.members()) {
    out.coefficients += basis.fourier_operator().col(v).head(static_cast<Eigen::Index>(m));
  }
  return out;
}

/// exp(-d² / 2l²). Every GSG evaluation in the library goes through here.
inline double gsg_from_squared_distance(double squared_distance, double length_scale) {
  if (!(length_scale > 0.0)) throw Error("kernel length-scale must be positive");
  return std::exp(-squared_distance / (2.0 * length_scale * length_scale));
}

/// Graph spectral Gaussian kernel. Uᵀ is orthonormal, so ‖Uᵀx − Uᵀx'‖ equals
/// ‖x − x'‖ and the kernel is evaluated on the indicators directly.
inline double gsg_kernel(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y, double length_scale) {
  if (x.size() != y.size()) throw Error("kernel inputs differ in length");
  std::size_t hamming = 0;
  for (std::size_t i = 0; i < x.size(); ++i) hamming += (x[i] != y[i]);
  return gsg_from_squared_distance(static_cast<double>(hamming), length_scale);
}

inline double gsg_kernel(const NodeSet& x, const NodeSet& y, double length_scale) {
  if (x.universe() != y.universe()) throw Error("kernel inputs differ in length");
  return gsg_from_squared_distance(squared_indicator_distance(x, y), length_scale);
}

/// The kernel through the explicit transform; O(N²) per call, kept as a
/// cross-check for gsg_kernel.
inline double gsg_kernel_via_transform(const SpectralBasis& basis, std::span<const std::uint8_t> x,
                                       std::span<const std::uint8_t> y, double length_scale) {
  const Eigen::VectorXd diff =
      fourier_transform(basis, x).coefficients - fourier_transform(basis, y).coefficients;
  return gsg_from_squared_distance(diff.squaredNorm(), length_scale);
}

}  // namespace bosoul
