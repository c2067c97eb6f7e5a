#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Seeded truncated SVD for small dense matrices. Deflated power iteration
// on the Gram matrix of the shorter side; no external numerics dependency.
// Deterministic for a fixed seed.
namespace affkb::linalg {

struct DenseSvd {
  int rows = 0;
  int cols = 0;
  int k = 0;
  std::vector<double> u;      // rows x k, row-major
  std::vector<double> sigma;  // k, descending, all >= 0
  std::vector<double> vt;     // k x cols, row-major

  bool operator==(const DenseSvd&) const = default;
};

// matrix is rows x cols row-major; 1 <= k <= min(rows, cols) and
// iterations >= 1 are required. Each singular component iterates until the
// value change falls below 1e-10 relative or `iterations` is exhausted.
// Rank-deficient directions get singular value 0 and deterministic
// orthonormal filler vectors.
DenseSvd truncated_svd(std::span<const double> matrix, int rows, int cols,
                       int k, int iterations, std::uint64_t seed);

// ||matrix - u * diag(sigma) * vt||_F
double reconstruction_error(std::span<const double> matrix, const DenseSvd& svd);

}  // namespace affkb::linalg
