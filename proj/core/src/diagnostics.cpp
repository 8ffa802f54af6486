#include "fasthcs/diagnostics.hpp"

#include "fasthcs/parallel.hpp"
#include "fasthcs/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fasthcs {

namespace {
constexpr double kInSpanRelTol = 1e-10;
}  // namespace

std::string_view to_string(OutlierFlag f) {
  switch (f) {
    case OutlierFlag::Regular: return "regular";
    case OutlierFlag::OrthogonalOutlier: return "od_outlier";
    case OutlierFlag::ScoreOutlier: return "sd_outlier";
    case OutlierFlag::Both: return "both";
  }
  return "unknown";
}

OutlierFlag outlier_flag_from_string(std::string_view s) {
  if (s == "regular") return OutlierFlag::Regular;
  if (s == "od_outlier") return OutlierFlag::OrthogonalOutlier;
  if (s == "sd_outlier") return OutlierFlag::ScoreOutlier;
  if (s == "both") return OutlierFlag::Both;
  throw InputError("unknown outlier flag '" + std::string(s) + "'");
}

Index DiagnosticReport::outlier_count() const {
  Index count = 0;
  for (OutlierFlag f : flags) count += f != OutlierFlag::Regular;
  return count;
}

double orthogonal_distance(const PcaModel& model, const Vector& y) {
  const Vector c = y - model.center;
  const double od = (c - model.loadings * (model.loadings.transpose() * c)).norm();
  // Residuals at rounding level of |y - t| are in-span points.
  return od <= kInSpanRelTol * c.norm() ? 0.0 : od;
}

double score_distance(const PcaModel& model, const Vector& y) {
  if ((model.eigenvalues.array() <= 0.0).any()) {
    throw DegenerateError(
        "model has a zero eigenvalue (exact fit); refit with a smaller q");
  }
  const Vector s = model.loadings.transpose() * (y - model.center);
  return std::sqrt((s.array().square() / model.eigenvalues.array()).sum());
}

double od_cutoff(std::span<const double> ods_on_subset, double e_over_n) {
  if (ods_on_subset.size() < 2) throw InputError("OD cutoff needs at least two distances");
  if (!(e_over_n > 0.0 && e_over_n <= 1.0)) {
    throw InputError("e/n must lie in (0, 1]");
  }
  std::vector<double> transformed;
  transformed.reserve(ods_on_subset.size());
  double mean = 0.0;
  for (double od : ods_on_subset) {
    transformed.push_back(std::cbrt(od * od));
    mean += transformed.back();
  }
  mean /= static_cast<double>(transformed.size());
  if (mean == 0.0) return 0.0;
  const double var = stats::sample_variance(transformed);
  // e/n = 1 (every row in the subset): the quantile is +inf and the
  // spread term vanishes.
  if (e_over_n == 1.0) return std::pow(mean, 1.5);
  const double z = stats::normal_quantile(0.975);
  const double chi = stats::chi2_quantile(e_over_n, 1.0);
  return std::pow(mean + z * std::sqrt(var / chi), 1.5);
}

double sd_cutoff(Index q) {
  if (q < 1) throw InputError("q must be at least 1");
  return std::sqrt(stats::chi2_quantile(0.975, static_cast<double>(q)));
}

DiagnosticReport diagnose(const DataMatrix& data, const PcaModel& model,
                          std::optional<double> e_over_n, unsigned threads) {
  data.validate();
  if (data.cols() != model.dim()) {
    throw InputError("model dimension " + std::to_string(model.dim()) +
                     " does not match data with " +
                     std::to_string(data.cols()) + " columns");
  }
  if (model.subset.empty()) throw InputError("model has no fitting subset");
  for (Index i : model.subset) {
    if (i < 0 || i >= data.rows()) throw InputError("model subset index out of range");
  }

  const Index n = data.rows();
  DiagnosticReport rep;
  rep.od.resize(n);
  rep.sd.resize(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t k) {
    const auto i = static_cast<Index>(k);
    const Vector y = data.values.row(i).transpose();
    rep.od(i) = orthogonal_distance(model, y);
    rep.sd(i) = score_distance(model, y);
  });

  std::vector<double> subset_ods;
  subset_ods.reserve(model.subset.size());
  for (Index i : model.subset) subset_ods.push_back(rep.od(i));
  const double ratio = e_over_n.value_or(static_cast<double>(model.subset.size()) /
                                         static_cast<double>(n));
  rep.od_cutoff = od_cutoff(subset_ods, ratio);
  rep.od_exact_fit = rep.od_cutoff == 0.0;
  rep.sd_cutoff = sd_cutoff(model.q());

  constexpr double inf = std::numeric_limits<double>::infinity();
  rep.scaled_od.resize(n);
  rep.scaled_sd = rep.sd / rep.sd_cutoff;
  rep.flags.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (rep.od_cutoff > 0.0) {
      rep.scaled_od(i) = rep.od(i) / rep.od_cutoff;
    } else {
      rep.scaled_od(i) = rep.od(i) > 0.0 ? inf : 0.0;
    }
    const bool od_out = rep.scaled_od(i) > 1.0;
    const bool sd_out = rep.scaled_sd(i) > 1.0;
    rep.flags[static_cast<std::size_t>(i)] =
        od_out && sd_out ? OutlierFlag::Both
        : od_out         ? OutlierFlag::OrthogonalOutlier
        : sd_out         ? OutlierFlag::ScoreOutlier
                         : OutlierFlag::Regular;
  }
  return rep;
}

}  // namespace fasthcs
