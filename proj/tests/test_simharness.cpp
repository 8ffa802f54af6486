#include "fasthcs/simharness.hpp"
#include "fasthcs/stats.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <numbers>

using namespace fasthcs;
using namespace fasthcs::sim;
using namespace testsupport;

namespace {

GroundTruth truth_for(Index p, Index q) {
  GroundTruth t;
  t.sigma_u = make_sigma_u(p, q);
  t.pi_q = Matrix::Identity(p, q);
  return t;
}

double median_of(std::vector<double> v) { return stats::median(std::move(v)); }

std::vector<double> bias_of(const ExperimentResult& r, Method m, std::size_t cell) {
  std::vector<double> out;
  for (const auto& rec : r.records)
    if (rec.method == m && rec.cell == cell) out.push_back(rec.bias_vq);
  return out;
}

}  // namespace

TEST(SigmaU, SmallExample) {
  const Vector d = make_sigma_u(8, 5);
  const Vector expected = (Vector(8) << 5, 3, 2, 1, 1, 0.1, 0.0505, 0.001).finished();
  EXPECT_LT((d - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SigmaU, TenthFibonacciOnTop) {
  EXPECT_EQ(make_sigma_u(20, 10)(0), 55.0);
  EXPECT_EQ(make_sigma_u(20, 10)(9), 1.0);
}

TEST(SigmaU, PositiveAndNonIncreasing) {
  for (Index q = 2; q <= 15; ++q) {
    for (Index p : {q + 1, q + 2, Index{100}, Index{1000}}) {
      if (p <= q) continue;
      const Vector d = make_sigma_u(p, q);
      ASSERT_EQ(d.size(), p);
      EXPECT_GT(d.minCoeff(), 0.0);
      for (Index j = 1; j < p; ++j) EXPECT_LE(d(j), d(j - 1));
    }
  }
  EXPECT_THROW(make_sigma_u(5, 5), ConfigError);
  EXPECT_THROW(make_sigma_u(5, 1), ConfigError);
}

TEST(Generate, AchievedNuMatchesRequest) {
  for (auto cfg : {Contamination::Shift, Contamination::PointMass}) {
    for (double nu : {2.0, 4.0, 6.0, 10.0}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        ContaminationSpec spec;
        spec.n = 100;
        spec.p = 20;
        spec.q = 3;
        spec.epsilon = 0.3;
        spec.nu = nu;
        spec.config = cfg;
        spec.seed = seed;
        const auto g = generate(spec);
        EXPECT_NEAR(g.achieved_nu, nu, 1e-3 * nu);
        IndexSet bad;
        for (Index i = 0; i < spec.n; ++i)
          if (g.truth.labels[static_cast<std::size_t>(i)] == RowLabel::Outlier) bad.push_back(i);
        EXPECT_EQ(static_cast<Index>(bad.size()), 30);
        // recompute the statistic directly
        const double chi = stats::chi2_quantile(0.975, 20);
        double smallest = 1e300;
        for (Index i : bad) {
          double m = 0;
          for (Index j = 0; j < 20; ++j) m += g.data.values(i, j) * g.data.values(i, j) / g.truth.sigma_u(j);
          smallest = std::min(smallest, std::sqrt(m / chi));
        }
        EXPECT_NEAR(smallest, nu, 1e-3 * nu);
      }
    }
  }
}

TEST(Generate, OutlierMeanLiesAlongNextAxis) {
  ContaminationSpec spec;
  spec.n = 400;
  spec.p = 12;
  spec.q = 4;
  spec.epsilon = 0.4;
  spec.nu = 5;
  spec.config = Contamination::PointMass;
  const auto g = generate(spec);
  Vector mean = Vector::Zero(12);
  int count = 0;
  for (Index i = 0; i < spec.n; ++i)
    if (g.truth.labels[static_cast<std::size_t>(i)] == RowLabel::Outlier) {
      mean += g.data.values.row(i).transpose();
      ++count;
    }
  mean /= count;
  Index arg = 0;
  mean.cwiseAbs().maxCoeff(&arg);
  EXPECT_EQ(arg, spec.q);
  EXPECT_NEAR(std::abs(mean(spec.q)), g.shift, 1e-2 * g.shift);
}

TEST(Generate, PointMassIsTight) {
  for (double nu : {4.0, 6.0, 10.0}) {
    ContaminationSpec spec;
    spec.n = 200;
    spec.p = 100;
    spec.q = 5;
    spec.epsilon = 0.4;
    spec.nu = nu;
    spec.config = Contamination::PointMass;
    const auto g = generate(spec);
    std::vector<Index> bad, good;
    for (Index i = 0; i < spec.n; ++i)
      (g.truth.labels[static_cast<std::size_t>(i)] == RowLabel::Outlier ? bad : good).push_back(i);
    std::vector<double> clean_d;
    for (std::size_t a = 0; a < good.size(); ++a)
      for (std::size_t b = a + 1; b < good.size(); ++b)
        clean_d.push_back((g.data.values.row(good[a]) - g.data.values.row(good[b])).norm());
    const double cut = 0.1 * median_of(clean_d);
    for (std::size_t a = 0; a < bad.size(); ++a)
      for (std::size_t b = a + 1; b < bad.size(); ++b)
        EXPECT_LE((g.data.values.row(bad[a]) - g.data.values.row(bad[b])).norm(), cut);
  }
}

TEST(Generate, CleanCovarianceConverges) {
  ContaminationSpec spec;
  spec.n = 5000;
  spec.p = 8;
  spec.q = 3;
  spec.epsilon = 0.0;
  const auto g = generate(spec);
  for (auto l : g.truth.labels) EXPECT_EQ(l, RowLabel::Clean);
  const Matrix c = covariance(g.data.values);
  const Matrix expected = g.truth.sigma_u.asDiagonal();
  EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 0.15);
}

TEST(Generate, InvalidSpecs) {
  ContaminationSpec spec;
  spec.n = 50;
  spec.p = 10;
  spec.q = 3;
  spec.epsilon = 0.5;
  EXPECT_THROW(generate(spec), ConfigError);
  spec.epsilon = 0.2;
  spec.nu = 0;
  EXPECT_THROW(generate(spec), ConfigError);
  // unreachable: far below the natural spread of shifted outliers
  spec.nu = 1e-4;
  EXPECT_THROW(generate(spec), ConfigError);
}

TEST(Generate, Deterministic) {
  ContaminationSpec spec;
  spec.n = 60;
  spec.p = 10;
  spec.q = 3;
  spec.epsilon = 0.2;
  spec.nu = 4;
  spec.seed = 9;
  const auto a = generate(spec);
  const auto b = generate(spec);
  EXPECT_TRUE((a.data.values.array() == b.data.values.array()).all());
  spec.seed = 10;
  const auto c = generate(spec);
  EXPECT_FALSE((a.data.values.array() == c.data.values.array()).all());
}

TEST(ShapeBias, IdentityAndScaling) {
  const GroundTruth t = truth_for(10, 4);
  const Vector lam = t.sigma_u.head(4);
  EXPECT_NEAR(shape_bias(lam, t.pi_q, t), 0.0, 1e-12);
  for (double c : {1e-6, 0.3, 7.0, 1e8}) EXPECT_NEAR(shape_bias(c * lam, t.pi_q, t), 0.0, 1e-10);
}

TEST(ShapeBias, HandComputedTwoByTwo) {
  GroundTruth t;
  t.sigma_u = (Vector(4) << 1, 1, 0.1, 0.001).finished();
  t.pi_q = Matrix::Identity(4, 2);
  const Vector g = (Vector(2) << 2.0, 0.5).finished();
  EXPECT_NEAR(shape_bias(g, t.pi_q, t), std::log(4.0), 1e-12);
}

TEST(ShapeBias, ScaleInvariantForRandomFits) {
  const GroundTruth t = truth_for(9, 3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix p = random_rotation(9, seed).leftCols(3);
    const Vector lam = (gaussian(1, 3, seed).row(0).array().abs() + 0.1).matrix().transpose();
    const double base = shape_bias(lam, p, t);
    EXPECT_GE(base, 0.0);
    EXPECT_NEAR(shape_bias(3.7 * lam, p, t), base, 1e-10 * (1 + base));
  }
}

TEST(ShapeBias, ImplosionIsInfinite) {
  const GroundTruth t = truth_for(6, 2);
  EXPECT_TRUE(std::isinf(shape_bias((Vector(2) << 1.0, 0.0).finished(), t.pi_q, t)));
  // loadings orthogonal to the true subspace
  Matrix off = Matrix::Zero(6, 2);
  off(3, 0) = 1;
  off(4, 1) = 1;
  EXPECT_TRUE(std::isinf(shape_bias((Vector(2) << 1.0, 1.0).finished(), off, t)));
}

TEST(Subspace, MaxsubExamples) {
  const Matrix pi = Matrix::Identity(4, 2);
  EXPECT_NEAR(maxsub(pi, pi), 0.0, 1e-7);
  Matrix orth = Matrix::Zero(4, 2);
  orth(2, 0) = 1;
  orth(3, 1) = 1;
  EXPECT_NEAR(maxsub(orth, pi), std::numbers::pi / 2, 1e-12);
  const Matrix e1 = Matrix::Identity(2, 1);
  Matrix v(2, 1);
  v << std::cos(std::numbers::pi / 6), std::sin(std::numbers::pi / 6);
  EXPECT_NEAR(maxsub(v, e1), std::numbers::pi / 6, 1e-10);
}

TEST(Subspace, SumsubExamplesAndIdentity) {
  const Matrix pi = Matrix::Identity(5, 3);
  EXPECT_NEAR(sumsub(pi, pi), 3.0, 1e-12);
  Matrix orth = Matrix::Zero(5, 3);
  orth(3, 0) = 1;
  orth(4, 1) = 1;
  orth(3, 2) = 0;
  EXPECT_NEAR(sumsub(orth.leftCols(2), pi.leftCols(2)), 0.0, 1e-12);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix p = random_rotation(7, seed).leftCols(3);
    const Matrix t = random_rotation(7, seed + 50).leftCols(3);
    EXPECT_NEAR(sumsub(p, t), (p.transpose() * t).squaredNorm(), 1e-10);
    EXPECT_GE(maxsub(p, t), 0.0);
    EXPECT_LE(maxsub(p, t), std::numbers::pi / 2);
  }
}

TEST(Subspace, BasisChangeInvariance) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix p = random_rotation(8, seed).leftCols(3);
    const Matrix t = random_rotation(8, seed + 70).leftCols(3);
    const Matrix o1 = random_rotation(3, seed + 1);
    const Matrix o2 = random_rotation(3, seed + 2);
    EXPECT_NEAR(maxsub(p * o1, t * o2), maxsub(p, t), 1e-10);
    EXPECT_NEAR(sumsub(p * o1, t * o2), sumsub(p, t), 1e-10);
  }
}

TEST(Experiment, CellOrderAndRecords) {
  ExperimentGrid grid;
  grid.n = 40;
  grid.p = {8};
  grid.q = {2};
  grid.epsilon = {0.1, 0.2};
  grid.nu = {3, 5};
  grid.configs = {Contamination::Shift, Contamination::PointMass};
  grid.replicates = 3;
  grid.pp_directions = 100;
  const auto cells = grid.cells();
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].epsilon, 0.1);
  EXPECT_EQ(cells[0].config, Contamination::Shift);
  EXPECT_EQ(cells[1].nu, 5.0);
  EXPECT_EQ(cells[2].config, Contamination::PointMass);
  EXPECT_EQ(cells[4].epsilon, 0.2);

  std::size_t calls = 0;
  const auto r = run_experiment(grid, [&](std::size_t done, std::size_t total, const ContaminationSpec&) {
    ++calls;
    EXPECT_LE(done, total);
  });
  EXPECT_EQ(calls, 8u);
  EXPECT_EQ(r.records.size(), 8u * 3u * 2u);
  EXPECT_EQ(r.summary.size(), 8u * 2u * 3u);
  for (const auto& rec : r.records) {
    EXPECT_GE(rec.bias_vq, 0.0);
    EXPECT_GE(rec.maxsub, 0.0);
    EXPECT_LE(rec.maxsub, std::numbers::pi / 2 + 1e-12);
  }
}

TEST(Experiment, DeterministicAcrossThreads) {
  ExperimentGrid grid;
  grid.n = 50;
  grid.p = {10};
  grid.q = {2};
  grid.epsilon = {0.2};
  grid.nu = {4, 8};
  grid.replicates = 4;
  grid.pp_directions = 150;
  grid.seed = 17;
  const auto a = run_experiment(grid);
  for (unsigned t : {2u, 8u}) {
    grid.threads = t;
    const auto b = run_experiment(grid);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      EXPECT_EQ(a.records[i].bias_vq, b.records[i].bias_vq);
      EXPECT_EQ(a.records[i].sumsub, b.records[i].sumsub);
      EXPECT_EQ(a.records[i].spec.seed, b.records[i].spec.seed);
    }
    for (std::size_t i = 0; i < a.summary.size(); ++i) {
      EXPECT_EQ(a.summary[i].median, b.summary[i].median);
      EXPECT_EQ(a.summary[i].p75, b.summary[i].p75);
    }
  }
}

TEST(Experiment, ShiftCurveOverNuHasNoNaN) {
  ExperimentGrid grid;
  grid.n = 60;
  grid.p = {10};
  grid.q = {2};
  grid.epsilon = {0.2};
  grid.nu = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  grid.configs = {Contamination::Shift};
  grid.methods = {Method::FastHCS};
  grid.replicates = 5;
  grid.pp_directions = 200;
  const auto r = run_experiment(grid);
  Index previous = grid.replicates;
  for (const auto& row : r.summary) {
    EXPECT_FALSE(std::isnan(row.median));
    EXPECT_FALSE(std::isnan(row.p75));
    const Index usable = row.replicates - row.failures;
    EXPECT_LE(usable, previous);
    previous = usable;
  }
}

TEST(Experiment, FailedReplicateIsRecorded) {
  ExperimentGrid grid;
  grid.n = 40;
  grid.p = {8};
  grid.q = {2};
  grid.epsilon = {0.2};
  grid.nu = {1e-5};
  grid.configs = {Contamination::Shift};
  grid.replicates = 2;
  const auto r = run_experiment(grid);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.failed);
    EXPECT_TRUE(std::isinf(rec.bias_vq));
    EXPECT_FALSE(rec.failure.empty());
  }
}

TEST(Experiment, CleanCellComparableToClassical) {
  ExperimentGrid grid;
  grid.n = 200;
  grid.p = {100};
  grid.q = {5};
  grid.epsilon = {0.0};
  grid.nu = {1};
  grid.configs = {Contamination::Shift};
  grid.replicates = 20;
  const auto r = run_experiment(grid);
  const double fast = median_of(bias_of(r, Method::FastHCS, 0));
  const double classical = median_of(bias_of(r, Method::Classical, 0));
  std::cout << "clean cell median bias: FastHCS " << fast << ", classical " << classical << "\n";
  EXPECT_LE(fast, classical + 0.2);
}

TEST(Experiment, PointMassClassicalWorseThanFastHCS) {
  ExperimentGrid grid;
  grid.n = 200;
  grid.p = {100};
  grid.q = {5};
  grid.epsilon = {0.4};
  grid.nu = {8};
  grid.configs = {Contamination::PointMass};
  grid.replicates = 10;
  const auto r = run_experiment(grid);
  const double fast = median_of(bias_of(r, Method::FastHCS, 0));
  const double classical = median_of(bias_of(r, Method::Classical, 0));
  std::cout << "point-mass nu=8 median bias: FastHCS " << fast << ", classical " << classical << "\n";
  EXPECT_GT(classical, fast);
}
