#pragma once

#include "fasthcs/reduce.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace fasthcs {

enum class OutlierFlag : std::uint8_t { Regular, OrthogonalOutlier, ScoreOutlier, Both };

std::string_view to_string(OutlierFlag f);
OutlierFlag outlier_flag_from_string(std::string_view s);

struct DiagnosticReport {
  Vector od;
  Vector sd;
  double od_cutoff = 0.0;
  double sd_cutoff = 0.0;
  /// Every OD on the fitting subset was zero, so the OD cutoff is zero and
  /// any positive OD scales to +inf.
  bool od_exact_fit = false;
  Vector scaled_od;
  Vector scaled_sd;
  std::vector<OutlierFlag> flags;

  Index outlier_count() const;
};

/// |(y - t) - (y - t) P P^T|
double orthogonal_distance(const PcaModel& model, const Vector& y);

/// sqrt(sum_j ((y - t).P_j)^2 / L_j). Throws DegenerateError when an
/// eigenvalue is zero (exact fit: reduce q).
double score_distance(const PcaModel& model, const Vector& y);

/// Wilson-Hilferty cutoff:
///   (mean(od^2/3) + z_0.975 * sqrt(var(od^2/3) / chi2_{e/n,1}))^(3/2)
/// with the ODs of the fitting subset. e/n = 1 drops the spread term.
double od_cutoff(std::span<const double> ods_on_subset, double e_over_n);

/// sqrt(chi2_{0.975,q})
double sd_cutoff(Index q);

/// Distances of every row to `model`, cutoffs and flags. `e_over_n`
/// defaults to |subset| / n.
DiagnosticReport diagnose(const DataMatrix& data, const PcaModel& model,
                          std::optional<double> e_over_n = std::nullopt,
                          unsigned threads = 1);

}  // namespace fasthcs
