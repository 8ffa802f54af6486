#pragma once

#include "fasthcs/parallel.hpp"
#include "fasthcs/reduce.hpp"

namespace fasthcs {

struct PPConfig {
  Index n_directions = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Row pair (a, b) whose difference defines projection direction `index`.
std::pair<Index, Index> pp_direction_rows(const Matrix& data, Index index,
                                          std::uint64_t seed);

/// Stahel-Donoho outlyingness: for each row, the maximum over random
/// directions v = y_a - y_b of |y_i.v - med| / MAD. A direction with zero MAD
/// makes every row off the median infinitely outlying.
Vector pp_outlyingness(const Matrix& data, const PPConfig& cfg);

struct PPResult {
  IndexSet subset;      // H^PP
  PcaModel model;       // fitted on the original data, scale sqrt(h - 1)
  Vector outlyingness;  // one per row
};

/// Outlyingness computed on `working` (an isometric image of `original`),
/// H^PP = h least outlying rows, PCA refit on `original`.
PPResult pp_subset_and_fit(const Matrix& original, const Matrix& working,
                           Index q, const PPConfig& cfg);

inline PPResult pp_subset_and_fit(const Matrix& data, Index q,
                                  const PPConfig& cfg) {
  return pp_subset_and_fit(data, data, q, cfg);
}

}  // namespace fasthcs
