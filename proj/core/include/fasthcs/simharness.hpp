#pragma once

#include "fasthcs/pipeline.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace fasthcs::sim {

enum class Contamination : std::uint8_t { Shift, PointMass };

std::string_view to_string(Contamination c);
Contamination contamination_from_string(std::string_view s);

/// One simulated data set: n rows, floor(epsilon * n) of them outliers at
/// calibrated distance nu.
struct ContaminationSpec {
  Index n = 200;
  Index p = 100;
  Index q = 5;
  double epsilon = 0.0;
  double nu = 1.0;
  Contamination config = Contamination::Shift;
  std::uint64_t seed = 1;

  Index outlier_count() const;
  void validate() const;
};

/// Diagonal of the uncontaminated covariance for (p, q).
using SigmaGenerator = std::function<Vector(Index p, Index q)>;

/// First q Fibonacci numbers in descending order followed by p - q entries
/// decreasing linearly from 0.1 to 0.001.
Vector make_sigma_u(Index p, Index q);

struct GroundTruth {
  Vector sigma_u;  // diagonal of Sigma^u
  Matrix pi_q;     // p x q true loadings
  std::vector<RowLabel> labels;
};

struct GeneratedData {
  DataMatrix data;
  GroundTruth truth;
  double shift = 0.0;        // magnitude of the outlier mean along e_{q+1}
  double achieved_nu = 0.0;  // realized min-distance statistic
};

/// min over outlier rows of sqrt(x' Sigma^-1 x / chi2_{0.975,p}).
double nu_statistic(const Matrix& values, const IndexSet& outliers,
                    const Vector& sigma_diag);

/// Clean rows ~ N(0, Sigma^u); outliers ~ N(mu^c, Sigma^c) with Sigma^c equal
/// to Sigma^u (shift) or 1e-4 Sigma^u (point mass) and mu^c along the
/// (q+1)-th axis, scaled so that nu_statistic matches spec.nu.
GeneratedData generate(const ContaminationSpec& spec,
                       const SigmaGenerator& sigma = make_sigma_u);

/// log(lambda_1 / lambda_q) of (Gamma^u)^-1/2 G_q (Gamma^u)^-1/2, where both
/// shape matrices are rank-q. +inf when V_q or the product is singular.
double shape_bias(const Vector& eigenvalues, const Matrix& loadings,
                  const GroundTruth& truth);

/// arccos(sqrt(lambda_q(Pi' P P' Pi)))
double maxsub(const Matrix& loadings, const Matrix& pi_q);

/// trace(Pi' P P' Pi)
double sumsub(const Matrix& loadings, const Matrix& pi_q);

enum class Method : std::uint8_t { FastHCS, Classical };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct ExperimentGrid {
  Index n = 200;
  std::vector<Index> p{100};
  std::vector<Index> q{5};
  std::vector<double> epsilon{0.2, 0.4};
  std::vector<double> nu{2, 4, 6, 8, 10};
  std::vector<Contamination> configs{Contamination::Shift, Contamination::PointMass};
  Index replicates = 50;
  std::vector<Method> methods{Method::FastHCS, Method::Classical};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// e / n used for the number of starting subsets.
  double clean_fraction = 0.6;
  Index directions = 25;
  Index growing_steps = 5;
  Index pp_directions = 1000;

  void validate() const;
  /// Cells in row-major order over (p, q, epsilon, config, nu).
  std::vector<ContaminationSpec> cells() const;
};

struct BiasRecord {
  ContaminationSpec spec;
  std::size_t cell = 0;
  Method method = Method::FastHCS;
  Index replicate = 0;
  double bias_vq = 0.0;
  double maxsub = 0.0;
  double sumsub = 0.0;
  bool failed = false;
  std::string failure;
  bool chose_pp = false;
};

struct SummaryRow {
  ContaminationSpec cell;
  Method method = Method::FastHCS;
  std::string statistic;  // bias, maxsub or sumsub
  double median = 0.0;
  double p75 = 0.0;
  Index failures = 0;
  Index replicates = 0;
};

struct ExperimentResult {
  std::vector<BiasRecord> records;
  std::vector<SummaryRow> summary;
};

/// Bias statistics of one replicate of one method. Never throws: failures
/// are recorded as the worst value of every statistic.
BiasRecord evaluate_method(const GeneratedData& generated, Method method,
                           const ExperimentGrid& grid, std::uint64_t fit_seed);

using ProgressFn = std::function<void(std::size_t done, std::size_t total,
                                      const ContaminationSpec& cell)>;

/// Runs every cell x replicate x method. Replicate r of cell c draws its
/// data from stream (seed, c, r).
ExperimentResult run_experiment(const ExperimentGrid& grid,
                                const ProgressFn& progress = {});

}  // namespace fasthcs::sim
