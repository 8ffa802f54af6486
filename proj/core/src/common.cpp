#include "fasthcs/common.hpp"

#include <algorithm>
#include <iterator>

namespace fasthcs {

Index subset_size_h(Index n, Index q) { return (n + q + 2) / 2; }

Matrix gather_rows(const Matrix& data, const IndexSet& rows) {
  Matrix out(static_cast<Index>(rows.size()), data.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Index>(k)) = data.row(rows[k]);
  }
  return out;
}

bool same_set(const IndexSet& a, const IndexSet& b) { return a == b; }

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace fasthcs

namespace fasthcs {

IndexSet smallest_indices(const Eigen::Ref<const Vector>& values,
                          Index count) {
  const Index n = values.size();
  count = std::clamp<Index>(count, 0, n);
  IndexSet order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  auto less = [&values](Index a, Index b) {
    return values(a) < values(b) || (values(a) == values(b) && a < b);
  };
  std::nth_element(order.begin(), order.begin() + count, order.end(), less);
  order.resize(static_cast<std::size_t>(count));
  std::sort(order.begin(), order.end());
  return order;
}

double mean_over(const Eigen::Ref<const Vector>& values, const IndexSet& rows) {
  double sum = 0.0;
  for (Index i : rows) sum += values(i);
  return sum / static_cast<double>(rows.size());
}

}  // namespace fasthcs
