#include "fasthcs/ppursuit.hpp"

#include "fasthcs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fasthcs {

namespace {

// Rows with identical coordinates give v = 0; retry a bounded number of
// times before concluding that the data has no spread.
constexpr int kPairAttempts = 1000;

}  // namespace

std::pair<Index, Index> pp_direction_rows(const Matrix& data, Index index,
                                          std::uint64_t seed) {
  const auto n = static_cast<std::uint64_t>(data.rows());
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(index), 1);
  for (int attempt = 0; attempt < kPairAttempts; ++attempt) {
    const auto a = static_cast<Index>(uniform_below(rng, n));
    auto b = static_cast<Index>(uniform_below(rng, n - 1));
    if (b >= a) ++b;
    if ((data.row(a) - data.row(b)).squaredNorm() > 0.0) return {a, b};
  }
  throw DegenerateError("could not find two distinct rows for a projection direction");
}

Vector pp_outlyingness(const Matrix& data, const PPConfig& cfg) {
  const Index n = data.rows();
  if (n < 3) throw InputError("projection pursuit needs at least 3 rows");
  if (cfg.n_directions < 1) throw ConfigError("need at least one projection direction");

  const unsigned workers = std::min<unsigned>(
      resolve_threads(cfg.threads), static_cast<unsigned>(cfg.n_directions));
  std::vector<Vector> partial(workers, Vector::Zero(n));
  const Index per = (cfg.n_directions + workers - 1) / workers;

  // Each worker owns a contiguous block of directions; max is exact, so the
  // final reduction does not depend on the partition.
  parallel_for(workers, workers, [&](std::size_t w) {
    Vector& best = partial[w];
    std::vector<double> proj(static_cast<std::size_t>(n));
    const Index begin = static_cast<Index>(w) * per;
    const Index end = std::min(cfg.n_directions, begin + per);
    for (Index d = begin; d < end; ++d) {
      const auto [a, b] = pp_direction_rows(data, d, cfg.seed);
      const Vector v = (data.row(a) - data.row(b)).transpose();
      Eigen::Map<Vector>(proj.data(), n) = data * v;
      const double med = stats::median(proj);
      std::vector<double> dev(proj.size());
      for (std::size_t i = 0; i < proj.size(); ++i) dev[i] = std::abs(proj[i] - med);
      const double scale = stats::median(dev);
      for (Index i = 0; i < n; ++i) {
        const double di = dev[static_cast<std::size_t>(i)];
        double out;
        if (scale > 0.0) {
          out = di / scale;
        } else {
          out = di > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        best(i) = std::max(best(i), out);
      }
    }
  });

  Vector result = Vector::Zero(n);
  for (const Vector& p : partial) result = result.cwiseMax(p);
  return result;
}

PPResult pp_subset_and_fit(const Matrix& original, const Matrix& working,
                           Index q, const PPConfig& cfg) {
  if (original.rows() != working.rows()) {
    throw InputError("original and working data must have the same rows");
  }
  const Index n = original.rows();
  const Index h = subset_size_h(n, q);
  PPResult out;
  out.outlyingness = pp_outlyingness(working, cfg);
  out.subset = smallest_indices(out.outlyingness, h);
  out.model = pca_fit_on_subset(original, out.subset, q,
                                std::sqrt(static_cast<double>(h - 1)));
  out.model.method = FitMethod::ProjectionPursuit;
  return out;
}

}  // namespace fasthcs
