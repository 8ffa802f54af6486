#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fasthcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free list of 0-based row indices.
using IndexSet = std::vector<Index>;

/// Bad user input: non-finite values, malformed files, invalid shapes.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Valid input that cannot support the requested fit (zero variance,
/// rank too low, every starting subset degenerate).
class DegenerateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parameter combination that is out of range or would not terminate.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// h = ceil((n + q + 1) / 2), the size of every candidate subset.
Index subset_size_h(Index n, Index q);

/// Rows of `data` listed in `rows`, in order.
Matrix gather_rows(const Matrix& data, const IndexSet& rows);

/// True when `a` and `b` contain the same indices (both sorted).
bool same_set(const IndexSet& a, const IndexSet& b);

IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);

}  // namespace fasthcs

namespace fasthcs {

/// Indices of the `count` smallest entries of `values`, ordering ties by
/// the lower index; returned sorted ascending.
IndexSet smallest_indices(const Eigen::Ref<const Vector>& values, Index count);

/// Mean of `values` over `rows`, summed in the order given.
double mean_over(const Eigen::Ref<const Vector>& values, const IndexSet& rows);

}  // namespace fasthcs
