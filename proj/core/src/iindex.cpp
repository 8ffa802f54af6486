#include "fasthcs/iindex.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fasthcs {

namespace {

// Eigenvalue ratio below which a starting subset counts as spanning fewer
// than q dimensions.
constexpr double kDegenerateRatio = 1e-14;

// Squared residual, relative to the mean squared row norm, below which a
// row lies on the affine span of a degenerate start.
constexpr double kOnSpanTolerance = 1e-20;

IndexSet draw_subset(Rng& rng, Index n, Index size) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index k = 0; k < size; ++k) {
    const auto j = static_cast<Index>(
        k + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n - k))));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
  }
  IndexSet out(pool.begin(), pool.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

// First h rows lying on the affine span center + span(columns of `span`),
// or nullopt when fewer than h rows do.
std::optional<IndexSet> rows_on_span(const Matrix& working,
                                     const RowVector& center,
                                     const Matrix& span, Index h) {
  const Index n = working.rows();
  const double scale = working.squaredNorm() / static_cast<double>(n);
  const double tol = kOnSpanTolerance * scale;

  IndexSet on_span;
  for (Index i = 0; i < n; ++i) {
    const RowVector c = working.row(i) - center;
    const RowVector resid = c - (c * span) * span.transpose();
    if (resid.squaredNorm() <= tol) on_span.push_back(i);
  }
  if (static_cast<Index>(on_span.size()) < h) return std::nullopt;
  on_span.resize(static_cast<std::size_t>(h));
  return on_span;
}

struct OnSpan {
  IndexSet rows;
  Index rank = 0;
};

// Degenerate start: span of its centered rows at numerical rank.
std::optional<OnSpan> exact_fit_rows(const Matrix& working,
                                     const IndexSet& start, Index h) {
  Matrix rows = gather_rows(working, start);
  const RowVector center = rows.colwise().mean();
  rows.rowwise() -= center;

  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = sv(0) * std::sqrt(kDegenerateRatio);
    while (rank < sv.size() && sv(rank) > cut) ++rank;
  }
  auto on = rows_on_span(working, center, svd.matrixV().leftCols(rank), h);
  if (!on) return std::nullopt;
  return OnSpan{std::move(*on), rank};
}

// Full-rank start: at least h rows on its q-flat. Row norms minus score
// norms screen cheaply before the exact residual check.
std::optional<OnSpan> exact_fit_rows(const Matrix& working,
                                     const StartFit& fit, Index h) {
  const RowVector center = fit.base_fit.center.transpose();
  const double scale = working.squaredNorm() / static_cast<double>(working.rows());
  Index near = 0;
  for (Index i = 0; i < working.rows(); ++i) {
    const double r2 = (working.row(i) - center).squaredNorm() -
                      fit.scores.row(i).squaredNorm();
    if (r2 <= 1e-10 * scale) ++near;
  }
  if (near < h) return std::nullopt;
  auto rows = rows_on_span(working, center, fit.base_fit.loadings, h);
  if (!rows) return std::nullopt;
  return OnSpan{std::move(*rows), fit.base_fit.loadings.cols()};
}

}  // namespace

void SearchConfig::validate(Index n, Index p) const {
  if (q < 2) throw ConfigError("q must be at least 2");
  if (q >= std::min(n, p)) {
    throw ConfigError("q must be smaller than min(n, p) = " +
                      std::to_string(std::min(n, p)));
  }
  if (n <= q + 1) throw ConfigError("need n > q + 1");
  if (directions < 1) throw ConfigError("K (directions) must be at least 1");
  if (growing_steps < 1) throw ConfigError("W (growing steps) must be at least 1");
  if (max_resample < 0) throw ConfigError("max_resample must be non-negative");
  const Index h = subset_size_h(n, q);
  if (clean_count && (*clean_count < h || *clean_count >= n)) {
    throw ConfigError("clean count e must satisfy h <= e < n (h = " +
                      std::to_string(h) + ", n = " + std::to_string(n) + ")");
  }
  if (starting_subsets) {
    for (const IndexSet& s : *starting_subsets) {
      if (static_cast<Index>(s.size()) != q + 1) {
        throw ConfigError("starting subsets must have q + 1 members");
      }
      for (Index i : s) {
        if (i < 0 || i >= n) throw ConfigError("starting subset index out of range");
      }
    }
  }
}

std::uint64_t num_starting_subsets(Index n, Index q, Index e) {
  if (e <= 0 || e >= n) throw ConfigError("clean count e must satisfy 0 < e < n");
  const long double frac = static_cast<long double>(e) / static_cast<long double>(n);
  const long double clean_prob = std::pow(frac, static_cast<long double>(q + 1));
  const long double denom = std::log1p(-clean_prob);
  const long double m = std::ceil(std::log(0.01L) / denom);
  if (!(clean_prob > 0.0L) || !std::isfinite(static_cast<double>(m)) ||
      m > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    throw ConfigError(
        "number of starting subsets overflows; use a smaller q or a larger "
        "clean fraction");
  }
  return static_cast<std::uint64_t>(m);
}

std::optional<StartFit> compute_scores(const Matrix& working,
                                       const IndexSet& start, Index q) {
  StartFit out;
  out.base_fit = pca_fit_on_subset(working, start, q,
                                   std::sqrt(static_cast<double>(q)));
  const Vector& ev = out.base_fit.eigenvalues;
  if (!(ev(0) > 0.0) || ev(q - 1) <= kDegenerateRatio * ev(0)) {
    return std::nullopt;
  }
  out.scores = (working.rowwise() - out.base_fit.center.transpose()) *
               out.base_fit.loadings;
  return out;
}

std::optional<Vector> hyperplane_normal(const Matrix& member_scores) {
  const Index q = member_scores.cols();
  Eigen::FullPivLU<Matrix> lu(member_scores);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) return std::nullopt;
  const Vector ones = Vector::Ones(q);
  Vector a = lu.solve(ones);
  if (!a.allFinite() || a.squaredNorm() == 0.0) return std::nullopt;
  if ((member_scores * a - ones).cwiseAbs().maxCoeff() > 1e-8) return std::nullopt;
  return a;
}

std::optional<Direction> sample_direction(const Matrix& scores,
                                          const IndexSet& start, Rng& rng,
                                          Index max_resample) {
  const Index q = scores.cols();
  const Index m = static_cast<Index>(start.size());
  if (m < q) throw InputError("starting subset has fewer than q members");
  for (Index attempt = 0; attempt <= max_resample; ++attempt) {
    const IndexSet picks = draw_subset(rng, m, q);
    Direction dir;
    dir.members.reserve(static_cast<std::size_t>(q));
    Matrix member_scores(q, q);
    for (Index j = 0; j < q; ++j) {
      const Index row = start[static_cast<std::size_t>(picks[static_cast<std::size_t>(j)])];
      dir.members.push_back(row);
      member_scores.row(j) = scores.row(row);
    }
    if (auto a = hyperplane_normal(member_scores)) {
      dir.normal = std::move(*a);
      return dir;
    }
  }
  return std::nullopt;
}

double squared_hyperplane_distance(const Vector& s, const Vector& a) {
  const double r = s.dot(a) - 1.0;
  return r * r / a.squaredNorm();
}

Matrix hyperplane_distances(const Matrix& scores,
                            const std::vector<Direction>& directions) {
  const Index n = scores.rows();
  const auto k_count = static_cast<Index>(directions.size());
  Matrix out(n, k_count);
  for (Index k = 0; k < k_count; ++k) {
    const Vector& a = directions[static_cast<std::size_t>(k)].normal;
    const double norm2 = a.squaredNorm();
    out.col(k) = ((scores * a).array() - 1.0).square() / norm2;
  }
  return out;
}

std::vector<Index> growing_sizes(Index n, Index q, Index steps) {
  std::vector<Index> sizes;
  sizes.reserve(static_cast<std::size_t>(steps));
  const Index span = n - q - 1;
  for (Index w = 1; w <= steps; ++w) {
    const Index num = span * w;
    const Index den = 2 * steps;
    sizes.push_back((num + den - 1) / den + q + 1);
  }
  return sizes;
}

IndexSet growing_step(const IndexSet& start, const Matrix& dist2, Index q,
                      Index steps) {
  const Index n = dist2.rows();
  const Index k_count = dist2.cols();
  const double inv_k = 1.0 / static_cast<double>(k_count);
  IndexSet current = start;
  Vector score(n);
  Vector denom(k_count);
  for (Index omega : growing_sizes(n, q, steps)) {
    for (Index k = 0; k < k_count; ++k) denom(k) = mean_over(dist2.col(k), current);
    for (Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Index k = 0; k < k_count; ++k) {
        const double d = dist2(i, k);
        double ratio;
        if (denom(k) > 0.0) {
          ratio = d / denom(k);
        } else {
          ratio = d > 0.0 ? kSaturatedRatio : 0.0;
        }
        acc += ratio * inv_k;
      }
      score(i) = acc;
    }
    current = smallest_indices(score, omega);
  }
  return current;
}

double i_index(const IndexSet& subset, const Matrix& dist2, Index h) {
  const Index k_count = dist2.cols();
  double total = 0.0;
  for (Index k = 0; k < k_count; ++k) {
    const auto col = dist2.col(k);
    const double num = mean_over(col, subset);
    const double den = mean_over(col, smallest_indices(col, h));
    double term;
    if (den > 0.0) {
      term = std::max(0.0, std::log(num / den));
    } else if (num > 0.0) {
      return std::numeric_limits<double>::infinity();
    } else {
      term = 0.0;
    }
    total += term;
  }
  return total / static_cast<double>(k_count);
}

CandidateSubset evaluate_candidate(const Matrix& working, std::size_t slot,
                                   const IndexSet* forced_start,
                                   const SearchConfig& cfg, Index h) {
  const Index n = working.rows();
  const Index q = cfg.q;
  Rng rng = make_stream(cfg.seed, slot, 0);

  CandidateSubset cand;
  cand.slot = slot;
  const Index attempts = forced_start ? 1 : cfg.max_resample + 1;
  for (Index attempt = 0; attempt < attempts; ++attempt) {
    cand.start = forced_start ? *forced_start : draw_subset(rng, n, q + 1);
    auto fit = compute_scores(working, cand.start, q);
    if (!fit) {
      if (auto rows = exact_fit_rows(working, cand.start, h)) {
        cand.grown = std::move(rows->rows);
        cand.exact_rank = rows->rank;
        cand.i_value = 0.0;
        cand.exact_fit = true;
        cand.valid = true;
        return cand;
      }
      continue;
    }
    if (auto rows = exact_fit_rows(working, *fit, h)) {
      cand.grown = std::move(rows->rows);
      cand.exact_rank = rows->rank;
      cand.i_value = 0.0;
      cand.exact_fit = true;
      cand.valid = true;
      return cand;
    }

    cand.directions.clear();
    bool ok = true;
    for (Index k = 0; k < cfg.directions && ok; ++k) {
      auto dir = sample_direction(fit->scores, cand.start, rng, cfg.max_resample);
      if (dir) {
        cand.directions.push_back(std::move(*dir));
      } else {
        ok = false;
      }
    }
    if (!ok) continue;

    const Matrix dist2 = hyperplane_distances(fit->scores, cand.directions);
    cand.grown = growing_step(cand.start, dist2, q, cfg.growing_steps);
    cand.i_value = i_index(cand.grown, dist2, h);
    if (cfg.keep_candidates) cand.scores = std::move(fit->scores);
    cand.valid = true;
    return cand;
  }
  cand.valid = false;
  cand.directions.clear();
  return cand;
}

SearchResult search(const Matrix& original, const ReducedBasis& reduced,
                    const SearchConfig& cfg) {
  const Matrix& working = reduced.scores;
  const Index n = working.rows();
  cfg.validate(n, original.cols());
  if (reduced.rank <= cfg.q) {
    throw DegenerateError("centered data spans only " +
                          std::to_string(reduced.rank) +
                          " dimensions; q must be smaller");
  }

  SearchResult result;
  result.h = subset_size_h(n, cfg.q);
  const Index e = cfg.clean_count.value_or(result.h);
  const std::uint64_t m_count =
      cfg.starting_subsets ? cfg.starting_subsets->size()
                           : num_starting_subsets(n, cfg.q, e);
  result.evaluated = m_count;

  std::vector<CandidateSubset> candidates(static_cast<std::size_t>(m_count));
  parallel_for(candidates.size(), cfg.threads, [&](std::size_t m) {
    const IndexSet* forced =
        cfg.starting_subsets ? &(*cfg.starting_subsets)[m] : nullptr;
    candidates[m] = evaluate_candidate(working, m, forced, cfg, result.h);
  });

  const CandidateSubset* best = nullptr;
  for (const CandidateSubset& c : candidates) {
    if (!c.valid) {
      ++result.degenerate;
      continue;
    }
    // Among exact fits the lowest-dimensional span wins.
    if (!best || c.i_value < best->i_value ||
        (c.exact_fit && best->exact_fit && c.exact_rank < best->exact_rank)) {
      best = &c;
    }
  }
  if (!best) {
    throw DegenerateError(
        "every starting subset was degenerate; the data may lie in fewer "
        "than q dimensions");
  }

  result.winner = *best;
  result.subset = best->grown;
  result.i_value = best->i_value;
  result.model = pca_fit_on_subset(
      original, result.subset, cfg.q,
      std::sqrt(static_cast<double>(result.h - 1)));
  result.model.method = FitMethod::IIndex;
  if (cfg.keep_candidates) result.candidates = std::move(candidates);
  return result;
}

std::vector<IndexSet> all_starting_subsets(Index n, Index q) {
  const Index k = q + 1;
  std::vector<IndexSet> out;
  if (k > n) return out;
  IndexSet cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), Index{0});
  for (;;) {
    out.push_back(cur);
    Index pos = k - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
    for (Index j = pos + 1; j < k; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

}  // namespace fasthcs
