#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "affkb/kernels.hpp"
#include "affkb/svd.hpp"
#include "affkb/util.hpp"

namespace affkb::linalg {

namespace {

std::span<const double> row(const std::vector<double>& m, int cols, int r) {
  return {m.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
}

// Gram-Schmidt step: v -= (v . basis_j) basis_j for every stored vector.
void project_out(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const std::vector<double>& b : basis) {
    double c = kernels::dot(v, b);
    kernels::axpy(-c, b, v);
  }
}

bool normalize(std::vector<double>& v, double floor) {
  double n = std::sqrt(kernels::squared_norm(v));
  if (n <= floor) return false;
  kernels::scale(v, 1.0 / n);
  return true;
}

// Deterministic orthonormal filler for rank-deficient directions: the first
// canonical basis vector with a nonzero residual against `basis`.
std::vector<double> orthonormal_filler(std::size_t n,
                                       const std::vector<std::vector<double>>& basis,
                                       double floor) {
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(n, 0.0);
    v[j] = 1.0;
    project_out(v, basis);
    if (normalize(v, floor)) return v;
  }
  return std::vector<double>(n, 0.0);  // n < basis size; unreachable in practice
}

std::vector<double> random_unit(std::size_t n, std::mt19937_64& eng,
                                const std::vector<std::vector<double>>& basis,
                                double floor) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform_unit(eng) - 0.5;
    project_out(v, basis);
    if (normalize(v, floor)) return v;
  }
  return orthonormal_filler(n, basis, floor);
}

// Top-k eigenpairs of the symmetric PSD matrix g (n x n) by deflated power
// iteration. Returns eigenvectors (each length n) and eigenvalues.
void top_eigs(const std::vector<double>& g, int n, int k, int iterations,
              std::mt19937_64& eng, std::vector<std::vector<double>>& vecs,
              std::vector<double>& vals) {
  double gnorm = std::sqrt(kernels::squared_norm(std::span<const double>(g)));
  const double floor = 1e-300 + 1e-14 * gnorm;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    std::vector<double> v = random_unit(static_cast<std::size_t>(n), eng, vecs, floor);
    double lambda = 0.0;
    double prev = -1.0;
    for (int it = 0; it < iterations; ++it) {
      for (int r = 0; r < n; ++r) w[static_cast<std::size_t>(r)] = kernels::dot(row(g, n, r), v);
      project_out(w, vecs);
      double norm = std::sqrt(kernels::squared_norm(std::span<const double>(w)));
      if (norm <= floor) {
        lambda = 0.0;
        break;  // v stays as the deterministic null-direction pick
      }
      lambda = norm;  // ||G v|| -> eigenvalue at convergence
      v = w;
      kernels::scale(v, 1.0 / norm);
      if (prev >= 0.0 && std::fabs(lambda - prev) <= 1e-10 * std::max(lambda, 1e-300)) {
        break;
      }
      prev = lambda;
    }
    vecs.push_back(std::move(v));
    vals.push_back(lambda);
  }
}

}  // namespace

DenseSvd truncated_svd(std::span<const double> matrix, int rows, int cols,
                       int k, int iterations, std::uint64_t seed) {
  if (rows < 1 || cols < 1 ||
      matrix.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("svd: matrix extent does not match rows*cols");
  }
  if (k < 1 || k > std::min(rows, cols)) {
    throw std::invalid_argument("svd: rank k out of range [1, min(rows, cols)]");
  }
  if (iterations < 1) throw std::invalid_argument("svd: iterations must be >= 1");

  // Work on the smaller Gram matrix; transpose the problem when rows < cols.
  const bool transposed = rows < cols;
  const int ar = transposed ? cols : rows;
  const int ac = transposed ? rows : cols;
  std::vector<double> a(static_cast<std::size_t>(ar) * ac);
  if (transposed) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        a[static_cast<std::size_t>(c) * ac + r] = matrix[static_cast<std::size_t>(r) * cols + c];
      }
    }
  } else {
    a.assign(matrix.begin(), matrix.end());
  }

  // g = a^T a (ac x ac)
  std::vector<double> g(static_cast<std::size_t>(ac) * ac, 0.0);
  for (int r = 0; r < ar; ++r) {
    std::span<const double> ar_row = row(a, ac, r);
    for (int i = 0; i < ac; ++i) {
      if (ar_row[static_cast<std::size_t>(i)] == 0.0) continue;
      kernels::axpy(ar_row[static_cast<std::size_t>(i)], ar_row,
                    {g.data() + static_cast<std::size_t>(i) * ac, static_cast<std::size_t>(ac)});
    }
  }

  std::mt19937_64 eng(seed);
  std::vector<std::vector<double>> right;  // eigenvectors of g, length ac
  std::vector<double> lambdas;
  top_eigs(g, ac, k, iterations, eng, right, lambdas);

  double anorm = std::sqrt(kernels::squared_norm(std::span<const double>(a)));
  const double floor = 1e-300 + 1e-14 * anorm;

  // Left vectors: a * v / sigma, with Gram-Schmidt cleanup; sigma from
  // ||a v|| (Rayleigh estimate, robust even for slightly unconverged v).
  std::vector<std::vector<double>> left;
  std::vector<double> sigma;
  for (int i = 0; i < k; ++i) {
    std::vector<double> u(static_cast<std::size_t>(ar));
    for (int r = 0; r < ar; ++r) u[static_cast<std::size_t>(r)] = kernels::dot(row(a, ac, r), right[static_cast<std::size_t>(i)]);
    double s = std::sqrt(kernels::squared_norm(std::span<const double>(u)));
    if (s <= floor) {
      sigma.push_back(0.0);
      left.push_back(orthonormal_filler(static_cast<std::size_t>(ar), left, floor));
      continue;
    }
    sigma.push_back(s);
    project_out(u, left);
    if (!normalize(u, floor)) u = orthonormal_filler(static_cast<std::size_t>(ar), left, floor);
    left.push_back(std::move(u));
  }

  // Descending sigma; deflation normally delivers this already.
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)]; });

  DenseSvd out;
  out.rows = rows;
  out.cols = cols;
  out.k = k;
  out.u.assign(static_cast<std::size_t>(rows) * k, 0.0);
  out.vt.assign(static_cast<std::size_t>(k) * cols, 0.0);
  out.sigma.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    int src = order[static_cast<std::size_t>(i)];
    out.sigma[static_cast<std::size_t>(i)] = sigma[static_cast<std::size_t>(src)];
    // In the transposed problem, `right` spans the original row space.
    const std::vector<double>& u_vec = transposed ? right[static_cast<std::size_t>(src)] : left[static_cast<std::size_t>(src)];
    const std::vector<double>& v_vec = transposed ? left[static_cast<std::size_t>(src)] : right[static_cast<std::size_t>(src)];
    for (int r = 0; r < rows; ++r) out.u[static_cast<std::size_t>(r) * k + i] = u_vec[static_cast<std::size_t>(r)];
    for (int c = 0; c < cols; ++c) out.vt[static_cast<std::size_t>(i) * cols + c] = v_vec[static_cast<std::size_t>(c)];
  }
  return out;
}

double reconstruction_error(std::span<const double> matrix, const DenseSvd& svd) {
  double acc = 0.0;
  for (int r = 0; r < svd.rows; ++r) {
    for (int c = 0; c < svd.cols; ++c) {
      double approx = 0.0;
      for (int i = 0; i < svd.k; ++i) {
        approx += svd.u[static_cast<std::size_t>(r) * svd.k + i] *
                  svd.sigma[static_cast<std::size_t>(i)] *
                  svd.vt[static_cast<std::size_t>(i) * svd.cols + c];
      }
      double d = matrix[static_cast<std::size_t>(r) * svd.cols + c] - approx;
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

}  // namespace affkb::linalg
