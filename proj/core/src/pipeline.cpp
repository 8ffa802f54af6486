#include "fasthcs/pipeline.hpp"

namespace fasthcs {

FitResult fit_fasthcs(const DataMatrix& data, const FitOptions& options) {
  const ReducedBasis reduced = center_and_reduce(data);

  SearchConfig search_cfg;
  search_cfg.q = options.q;
  search_cfg.clean_count = options.clean_count;
  search_cfg.directions = options.directions;
  search_cfg.growing_steps = options.growing_steps;
  search_cfg.seed = options.seed;
  search_cfg.max_resample = options.max_resample;
  search_cfg.threads = options.threads;

  PPConfig pp_cfg;
  pp_cfg.n_directions = options.pp_directions;
  pp_cfg.seed = options.seed;
  pp_cfg.threads = options.threads;

  FitResult result;
  result.iindex = search(data.values, reduced, search_cfg);
  result.h = result.iindex.h;
  result.pp = pp_subset_and_fit(data.values, reduced.scores, options.q, pp_cfg);
  result.selection = select_final(data.values, result.iindex, result.pp);
  return result;
}

}  // namespace fasthcs
