#pragma once

#include "fasthcs/common.hpp"
#include "fasthcs/parallel.hpp"

#include <algorithm>
#include <cmath>

// Seeded generators for property tests. Each draw depends only on the seed.
namespace testsupport {

using fasthcs::Index;
using fasthcs::Matrix;
using fasthcs::Vector;

inline Matrix gaussian(Index n, Index p, std::uint64_t seed, double scale = 1.0) {
  fasthcs::Rng rng(fasthcs::stream_seed(seed, 901, 17));
  Matrix m(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) m(i, j) = scale * fasthcs::standard_normal(rng);
  return m;
}

/// Rows ~ N(0, diag(sd^2)).
inline Matrix gaussian_scaled(Index n, const Vector& sd, std::uint64_t seed) {
  Matrix m = gaussian(n, sd.size(), seed);
  for (Index j = 0; j < sd.size(); ++j) m.col(j) *= sd(j);
  return m;
}

/// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix.
inline Matrix random_rotation(Index p, std::uint64_t seed) {
  const Matrix g = gaussian(p, p, seed ^ 0x5bd1e995ULL);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(p, p);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < p; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

inline Index uniform_index(fasthcs::Rng& rng, Index bound) {
  return static_cast<Index>(fasthcs::uniform_below(rng, static_cast<std::uint64_t>(bound)));
}

/// Sorted random subset of size k from {0..n-1}.
inline fasthcs::IndexSet random_subset(Index n, Index k, fasthcs::Rng& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k; ++i) {
    const Index j = i + uniform_index(rng, n - i);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  fasthcs::IndexSet out(all.begin(), all.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest |cosine| between column j of a and column j of b, i.e. equality
/// of directions up to sign.
inline double abs_cos(const Vector& a, const Vector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

/// Covariance with divisor (n - 1).
inline Matrix covariance(const Matrix& x) {
  const Vector mu = x.colwise().mean();
  const Matrix c = x.rowwise() - mu.transpose();
  return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

}  // namespace testsupport
