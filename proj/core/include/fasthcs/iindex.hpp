#pragma once

#include "fasthcs/parallel.hpp"
#include "fasthcs/reduce.hpp"

#include <cstdint>
#include <optional>

namespace fasthcs {

/// Parameters of the I-index subset search.
struct SearchConfig {
  Index q = 2;
  /// Presumed number of clean rows e, h <= e < n. Defaults to h.
  std::optional<Index> clean_count;
  Index directions = 25;    // K
  Index growing_steps = 5;  // W
  std::uint64_t seed = 1;
  Index max_resample = 50;
  unsigned threads = 1;
  /// Evaluate exactly these (q+1)-subsets instead of M random ones.
  std::optional<std::vector<IndexSet>> starting_subsets;
  /// Keep every evaluated candidate (including score matrices) in the result.
  bool keep_candidates = false;

  void validate(Index n, Index p) const;
};

/// M = ceil(log(0.01) / log(1 - (e/n)^(q+1))): enough random (q+1)-subsets
/// that at least one is clean with probability 0.99.
std::uint64_t num_starting_subsets(Index n, Index q, Index e);

/// Projection of all rows onto the leading q loadings of a starting subset.
struct StartFit {
  Matrix scores;  // n x q
  PcaModel base_fit;
};

/// Fits PCA on rows `start` (scale sqrt(q)) and projects every row of
/// `working` onto it. Returns nullopt when the start spans fewer than q
/// dimensions.
std::optional<StartFit> compute_scores(const Matrix& working,
                                       const IndexSet& start, Index q);

/// Normal a of the hyperplane {s : s.a = 1} through q score rows.
struct Direction {
  Vector normal;
  std::vector<Index> members;  // rows of the starting subset it passes through
};

/// Draws q distinct members of `start` and solves s_j . a = 1 for them.
/// Singular draws are retried up to `max_resample` times.
std::optional<Direction> sample_direction(const Matrix& scores,
                                          const IndexSet& start, Rng& rng,
                                          Index max_resample = 50);

/// Solves s_j . a = 1 for the given q score rows; nullopt when singular.
std::optional<Vector> hyperplane_normal(const Matrix& member_scores);

/// ((s.a - 1)^2) / |a|^2, the squared distance from s to {x : x.a = 1}.
double squared_hyperplane_distance(const Vector& s, const Vector& a);

/// n x K matrix of squared hyperplane distances of every score row.
Matrix hyperplane_distances(const Matrix& scores,
                            const std::vector<Direction>& directions);

/// Subset sizes omega_w = ceil((n - q - 1) w / (2W)) + q + 1, w = 1..W.
std::vector<Index> growing_sizes(Index n, Index q, Index steps);

/// Saturating stand-in for a positive distance over a zero mean distance.
inline constexpr double kSaturatedRatio = 1e300;

/// Growing steps: at each w keeps the omega_w rows with the smallest
/// direction-normalized mean distance to the previous subset. Ties go to
/// the lower row index. `dist2` is n x K.
IndexSet growing_step(const IndexSet& start, const Matrix& dist2, Index q,
                      Index steps);

/// Average over directions of log(mean dist over `subset` / mean dist over
/// the h rows closest along that direction), with log(0/0) = 0.
double i_index(const IndexSet& subset, const Matrix& dist2, Index h);

struct CandidateSubset {
  std::size_t slot = 0;
  IndexSet start;
  Matrix scores;  // only filled when SearchConfig::keep_candidates
  std::vector<Direction> directions;
  IndexSet grown;
  double i_value = 0.0;
  /// At least h rows lie on the affine span of the start (at most q
  /// dimensions); `grown` holds the first h of them and the I-index is 0.
  bool exact_fit = false;
  Index exact_rank = 0;  // dimension of that span
  bool valid = false;
};

struct SearchResult {
  IndexSet subset;  // H^I
  PcaModel model;   // refit on the original data with scale sqrt(h - 1)
  double i_value = 0.0;
  CandidateSubset winner;
  std::vector<CandidateSubset> candidates;  // only with keep_candidates
  std::uint64_t evaluated = 0;              // M
  std::uint64_t degenerate = 0;             // slots that never produced a candidate
  Index h = 0;
};

/// Evaluates one starting-subset slot. Used by `search`; exposed for tests.
CandidateSubset evaluate_candidate(const Matrix& working, std::size_t slot,
                                   const IndexSet* forced_start,
                                   const SearchConfig& cfg, Index h);

/// I-index search over the reduced data; the returned model is fitted on
/// `original` (same rows, full dimension).
SearchResult search(const Matrix& original, const ReducedBasis& reduced,
                    const SearchConfig& cfg);

/// All (q+1)-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSet> all_starting_subsets(Index n, Index q);

}  // namespace fasthcs
