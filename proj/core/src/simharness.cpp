#include "fasthcs/simharness.hpp"

#include "fasthcs/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace fasthcs::sim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kGenerateStream = 2;
}  // namespace

std::string_view to_string(Contamination c) {
  return c == Contamination::Shift ? "shift" : "point_mass";
}

Contamination contamination_from_string(std::string_view s) {
  if (s == "shift") return Contamination::Shift;
  if (s == "point_mass" || s == "pointmass" || s == "point-mass") {
    return Contamination::PointMass;
  }
  throw InputError("unknown contamination '" + std::string(s) + "'");
}

std::string_view to_string(Method m) {
  return m == Method::FastHCS ? "fasthcs" : "classical";
}

Method method_from_string(std::string_view s) {
  if (s == "fasthcs") return Method::FastHCS;
  if (s == "classical") return Method::Classical;
  throw InputError("unknown method '" + std::string(s) + "'");
}

Index ContaminationSpec::outlier_count() const {
  return static_cast<Index>(std::floor(epsilon * static_cast<double>(n)));
}

void ContaminationSpec::validate() const {
  if (q < 2 || p <= q) throw ConfigError("need p > q >= 2");
  if (n <= q + 1) throw ConfigError("need n > q + 1");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in [0, 0.5)");
  if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  if (n - outlier_count() < subset_size_h(n, q)) {
    throw ConfigError("clean row count is below h");
  }
}

Vector make_sigma_u(Index p, Index q) {
  if (q < 2 || p <= q) throw ConfigError("need p > q >= 2");
  Vector d(p);
  double a = 1.0;
  double b = 1.0;
  for (Index j = 0; j < q; ++j) {
    d(q - 1 - j) = a;  // Fibonacci 1, 1, 2, 3, ... stored descending
    const double next = a + b;
    a = b;
    b = next;
  }
  const Index tail = p - q;
  for (Index j = 0; j < tail; ++j) {
    d(q + j) = tail == 1 ? 0.1
                         : 0.1 + (0.001 - 0.1) * static_cast<double>(j) /
                                     static_cast<double>(tail - 1);
  }
  return d;
}

double nu_statistic(const Matrix& values, const IndexSet& outliers,
                    const Vector& sigma_diag) {
  const double chi = stats::chi2_quantile(0.975, static_cast<double>(values.cols()));
  const Vector inv = sigma_diag.cwiseInverse();
  double best = kInf;
  for (Index i : outliers) {
    const double m2 = values.row(i).array().square().matrix().dot(inv);
    best = std::min(best, m2);
  }
  return std::sqrt(best / chi);
}

GeneratedData generate(const ContaminationSpec& spec, const SigmaGenerator& sigma) {
  spec.validate();
  const Index n = spec.n;
  const Index p = spec.p;

  GeneratedData out;
  out.truth.sigma_u = sigma(p, spec.q);
  const Vector& sd = out.truth.sigma_u;
  if (sd.size() != p || (sd.array() <= 0.0).any()) {
    throw ConfigError("covariance generator must return p positive entries");
  }
  for (Index j = 1; j < p; ++j) {
    if (sd(j) > sd(j - 1)) throw ConfigError("covariance diagonal must be non-increasing");
  }
  out.truth.pi_q = Matrix::Identity(p, spec.q);

  Rng rng = make_stream(spec.seed, 0, kGenerateStream);
  const Index c = spec.outlier_count();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index k = 0; k < c; ++k) {
    const auto j = k + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n - k)));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
  }
  IndexSet outliers(perm.begin(), perm.begin() + c);
  std::sort(outliers.begin(), outliers.end());

  out.truth.labels.assign(static_cast<std::size_t>(n), RowLabel::Clean);
  for (Index i : outliers) out.truth.labels[static_cast<std::size_t>(i)] = RowLabel::Outlier;

  const Vector root = sd.cwiseSqrt();
  const double outlier_scale = spec.config == Contamination::PointMass ? 1e-2 : 1.0;
  Matrix values(n, p);
  for (Index i = 0; i < n; ++i) {
    const bool is_out = out.truth.labels[static_cast<std::size_t>(i)] == RowLabel::Outlier;
    const double scale = is_out ? outlier_scale : 1.0;
    for (Index j = 0; j < p; ++j) values(i, j) = standard_normal(rng) * root(j) * scale;
  }

  if (c > 0) {
    const Index axis = spec.q;  // (q+1)-th eigenvector of the diagonal Sigma^u
    Matrix base = values;
    auto stat_at = [&](double shift) {
      for (Index i : outliers) values(i, axis) = base(i, axis) + shift;
      return nu_statistic(values, outliers, sd);
    };
    if (stat_at(0.0) > spec.nu) {
      throw ConfigError("nu = " + std::to_string(spec.nu) +
                        " is below the distance of unshifted outliers");
    }
    double lo = 0.0;
    double hi = std::sqrt(sd(axis));
    while (stat_at(hi) < spec.nu) {
      lo = hi;
      hi *= 2.0;
    }
    double mid = hi;
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      const double f = stat_at(mid);
      if (std::abs(f - spec.nu) <= 1e-10 * spec.nu) break;
      if (f < spec.nu) lo = mid; else hi = mid;
    }
    out.shift = mid;
    out.achieved_nu = stat_at(mid);
  }

  out.data.values = std::move(values);
  out.data.labels = out.truth.labels;
  return out;
}

double shape_bias(const Vector& eigenvalues, const Matrix& loadings,
                  const GroundTruth& truth) {
  const Index q = truth.pi_q.cols();
  if (eigenvalues.size() != q || loadings.cols() != q) {
    throw InputError("fit and ground truth disagree on q");
  }
  if ((eigenvalues.array() <= 0.0).any() || !eigenvalues.allFinite()) return kInf;

  // Sigma_q = Pi Lambda Pi' and V_q = P L P' share a common rank-q frame
  // only through Pi' P; on span(Pi) the transformed shape matrix is
  //   c * Lambda^-1/2 (Pi' P) L (P' Pi) Lambda^-1/2
  // with c = |Sigma_q|^{1/q} / |V_q|^{1/q}.
  Vector lambda(q);
  for (Index j = 0; j < q; ++j) lambda(j) = truth.pi_q.col(j).dot(
      truth.sigma_u.asDiagonal() * truth.pi_q.col(j));
  const double log_det_sigma = lambda.array().log().sum();
  const double log_det_v = eigenvalues.array().log().sum();
  const double c = std::exp((log_det_sigma - log_det_v) / static_cast<double>(q));

  const Matrix overlap = truth.pi_q.transpose() * loadings;  // q x q
  const Vector inv_root = lambda.cwiseSqrt().cwiseInverse();
  Matrix m = inv_root.asDiagonal() * overlap * eigenvalues.asDiagonal() *
             overlap.transpose() * inv_root.asDiagonal();
  m *= c;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()),
                                            Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues()(q - 1);
  const double bottom = eig.eigenvalues()(0);
  if (!(top > 0.0) || !(bottom > top * 1e-15)) return kInf;
  return std::log(top / bottom);
}

namespace {
Vector overlap_spectrum(const Matrix& loadings, const Matrix& pi_q) {
  const Matrix cross = pi_q.transpose() * loadings;
  const Matrix d = cross * cross.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();  // ascending
}
}  // namespace

double maxsub(const Matrix& loadings, const Matrix& pi_q) {
  const double smallest = std::clamp(overlap_spectrum(loadings, pi_q)(0), 0.0, 1.0);
  return std::acos(std::sqrt(smallest));
}

double sumsub(const Matrix& loadings, const Matrix& pi_q) {
  const Matrix cross = pi_q.transpose() * loadings;
  return (cross * cross.transpose()).trace();
}

void ExperimentGrid::validate() const {
  if (p.empty() || q.empty() || epsilon.empty() || nu.empty() || configs.empty()) {
    throw ConfigError("every grid axis needs at least one value");
  }
  if (methods.empty()) throw ConfigError("no methods requested");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(clean_fraction > 0.0 && clean_fraction < 1.0)) {
    throw ConfigError("clean_fraction must lie in (0, 1)");
  }
  for (const ContaminationSpec& c : cells()) c.validate();
}

std::vector<ContaminationSpec> ExperimentGrid::cells() const {
  std::vector<ContaminationSpec> out;
  for (Index pv : p) {
    for (Index qv : q) {
      for (double eps : epsilon) {
        for (Contamination cfg : configs) {
          for (double nv : nu) {
            ContaminationSpec s;
            s.n = n;
            s.p = pv;
            s.q = qv;
            s.epsilon = eps;
            s.nu = nv;
            s.config = cfg;
            s.seed = seed;
            out.push_back(s);
          }
        }
      }
    }
  }
  return out;
}

BiasRecord evaluate_method(const GeneratedData& generated, Method method,
                           const ExperimentGrid& grid, std::uint64_t fit_seed) {
  BiasRecord rec;
  rec.method = method;
  const Index n = generated.data.rows();
  const Index q = generated.truth.pi_q.cols();
  try {
    PcaModel model;
    if (method == Method::FastHCS) {
      FitOptions opt;
      opt.q = q;
      const Index h = subset_size_h(n, q);
      const auto e = static_cast<Index>(std::llround(grid.clean_fraction * static_cast<double>(n)));
      opt.clean_count = std::clamp<Index>(e, h, n - 1);
      opt.directions = grid.directions;
      opt.growing_steps = grid.growing_steps;
      opt.pp_directions = grid.pp_directions;
      opt.seed = fit_seed;
      opt.threads = 1;
      FitResult fit = fit_fasthcs(generated.data, opt);
      rec.chose_pp = fit.selection.chose_pp;
      model = fit.model();
    } else {
      model = classical_pca(generated.data.values, q);
    }
    rec.bias_vq = shape_bias(model.eigenvalues, model.loadings, generated.truth);
    rec.maxsub = maxsub(model.loadings, generated.truth.pi_q);
    rec.sumsub = sumsub(model.loadings, generated.truth.pi_q);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.failure = e.what();
    rec.bias_vq = kInf;
    rec.maxsub = std::numbers::pi / 2.0;
    rec.sumsub = 0.0;
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentGrid& grid, const ProgressFn& progress) {
  grid.validate();
  const std::vector<ContaminationSpec> cells = grid.cells();
  const auto reps = static_cast<std::size_t>(grid.replicates);
  const std::size_t methods = grid.methods.size();
  const std::size_t jobs = cells.size() * reps;

  ExperimentResult result;
  result.records.resize(jobs * methods);
  std::vector<std::atomic<std::size_t>> remaining(cells.size());
  for (auto& r : remaining) r.store(reps);
  std::atomic<std::size_t> cells_done{0};
  std::mutex progress_mutex;

  parallel_for(jobs, grid.threads, [&](std::size_t job) {
    const std::size_t cell = job / reps;
    const std::size_t rep = job % reps;
    ContaminationSpec spec = cells[cell];
    spec.seed = stream_seed(grid.seed, cell, rep);

    std::optional<GeneratedData> generated;
    std::string failure;
    try {
      generated = generate(spec);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    for (std::size_t k = 0; k < methods; ++k) {
      BiasRecord rec;
      if (generated) {
        rec = evaluate_method(*generated, grid.methods[k], grid, spec.seed);
      } else {
        rec.method = grid.methods[k];
        rec.failed = true;
        rec.failure = failure;
        rec.bias_vq = kInf;
        rec.maxsub = std::numbers::pi / 2.0;
        rec.sumsub = 0.0;
      }
      rec.spec = spec;
      rec.cell = cell;
      rec.replicate = static_cast<Index>(rep);
      result.records[job * methods + k] = std::move(rec);
    }

    if (remaining[cell].fetch_sub(1) == 1 && progress) {
      const std::size_t done = cells_done.fetch_add(1) + 1;
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(done, cells.size(), cells[cell]);
    }
  });

  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    for (std::size_t k = 0; k < methods; ++k) {
      std::vector<double> bias, angle, total;
      Index failures = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const BiasRecord& r = result.records[(cell * reps + rep) * methods + k];
        bias.push_back(r.bias_vq);
        angle.push_back(r.maxsub);
        total.push_back(r.sumsub);
        failures += r.failed;
      }
      auto add = [&](const char* name, const std::vector<double>& v) {
        SummaryRow row;
        row.cell = cells[cell];
        row.method = grid.methods[k];
        row.statistic = name;
        row.median = stats::quantile(v, 0.5);
        row.p75 = stats::quantile(v, 0.75);
        row.failures = failures;
        row.replicates = grid.replicates;
        result.summary.push_back(std::move(row));
      };
      add("bias", bias);
      add("maxsub", angle);
      add("sumsub", total);
    }
  }
  return result;
}

}  // namespace fasthcs::sim
