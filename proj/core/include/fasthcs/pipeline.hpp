#pragma once

#include "fasthcs/select.hpp"

namespace fasthcs {

/// User-facing options of a complete FastHCS fit.
struct FitOptions {
  Index q = 2;
  /// Presumed clean row count e; defaults to h. See SearchConfig.
  std::optional<Index> clean_count;
  Index directions = 25;
  Index growing_steps = 5;
  Index pp_directions = 1000;
  Index max_resample = 50;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct FitResult {
  SelectionOutcome selection;
  SearchResult iindex;
  PPResult pp;
  Index h = 0;

  const PcaModel& model() const { return selection.model; }
};

/// Reduce, I-index search, projection pursuit, final selection.
FitResult fit_fasthcs(const DataMatrix& data, const FitOptions& options);

}  // namespace fasthcs
