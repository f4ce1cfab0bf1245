#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bosoul/spectral.hpp"

namespace bosoul {

// Layout, all little-endian:
//   char[8] magic "BSLBASIS" | u32 version | u64 N | u64 graph fingerprint
//   f64[N] eigenvalues (ascending) | f64[N*N] Fourier operator, row-major
inline constexpr std::array<char, 8> kBasisMagic{'B', 'S', 'L', 'B', 'A', 'S', 'I', 'S'};
inline constexpr std::uint32_t kBasisFormatVersion = 1;

namespace detail {

template <typename T>
void write_le(std::ostream& out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_same_v<T, double>) {
    bits = std::bit_cast<std::uint64_t>(value);
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw Error("truncated basis file");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace detail

inline void write_basis(std::ostream& out, const SpectralBasis& basis) {
  out.write(kBasisMagic.data(), kBasisMagic.size());
  detail::write_le<std::uint32_t>(out, kBasisFormatVersion);
  detail::write_le<std::uint64_t>(out, basis.size());
  detail::write_le<std::uint64_t>(out, basis.graph_fingerprint());
  const auto n = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index i = 0; i < n; ++i) detail::write_le<double>(out, basis.eigenvalues()(i));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) detail::write_le<double>(out, basis.fourier_operator()(i, j));
  }
}

inline SpectralBasis read_basis(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kBasisMagic) throw Error("not a basis file");
  const auto version = detail::read_le<std::uint32_t>(in);
  if (version != kBasisFormatVersion) throw Error("unsupported basis file version " + std::to_string(version));
  const auto n = static_cast<Eigen::Index>(detail::read_le<std::uint64_t>(in));
  const auto fingerprint = detail::read_le<std::uint64_t>(in);
  Eigen::VectorXd eigenvalues(n);
  for (Eigen::Index i = 0; i < n; ++i) eigenvalues(i) = detail::read_le<double>(in);
  Eigen::MatrixXd op(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) op(i, j) = detail::read_le<double>(in);
  }
  return SpectralBasis(std::move(eigenvalues), std::move(op), fingerprint);
}

inline std::filesystem::path basis_cache_path(const std::filesystem::path& dir, const Graph& g,
                                              LaplacianKind kind) {
  std::ostringstream name;
  name << "basis-" << std::hex << g.fingerprint() << (kind == LaplacianKind::Normalized ? "-norm" : "-comb")
       << ".bin";
  return dir / name.str();
}

/// Loads the basis for `g` from `dir` when present and matching, otherwise
/// builds it and writes it there.
inline SpectralBasis cached_basis(const Graph& g, const std::filesystem::path& dir,
                                  LaplacianKind kind = LaplacianKind::Combinatorial) {
  const auto path = basis_cache_path(dir, g, kind);
  if (std::ifstream in(path, std::ios::binary); in) {
    try {
      SpectralBasis basis = read_basis(in);
      if (basis.size() == g.num_nodes() && basis.graph_fingerprint() == g.fingerprint()) return basis;
    } catch (const Error&) {
      // stale or corrupt; rebuild below
    }
  }
  SpectralBasis basis = build_basis(g, kind);
  std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write basis cache '" + tmp + "'");
    write_basis(out, basis);
  }
  std::filesystem::rename(tmp, path);
  return basis;
}

}  // namespace bosoul
