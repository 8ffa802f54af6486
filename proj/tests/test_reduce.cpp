#include "fasthcs/reduce.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <numeric>

using namespace fasthcs;
using namespace testsupport;

namespace {

Matrix pairwise_distances(const Matrix& x) {
  Matrix d(x.rows(), x.rows());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.rows(); ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

IndexSet all_rows(Index n) {
  IndexSet s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), Index{0});
  return s;
}

Vector covariance_eigenvalues_desc(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance(x));
  return eig.eigenvalues().reverse();
}

}  // namespace

TEST(DataMatrix, ValidateRejectsBadShapesAndValues) {
  DataMatrix d;
  d.values = Matrix::Zero(2, 3);
  EXPECT_THROW(d.validate(), InputError);
  d.values = Matrix::Zero(3, 1);
  EXPECT_THROW(d.validate(), InputError);
  d.values = gaussian(5, 3, 1);
  d.validate();
  d.values(2, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(d.validate(), InputError);
  d.values(2, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(d.validate(), InputError);
  d.values(2, 1) = 0.0;
  d.labels = std::vector<RowLabel>(4, RowLabel::Clean);
  EXPECT_THROW(d.validate(), InputError);
}

TEST(Reduce, ThreePointsInR5SpanTwoDimensions) {
  DataMatrix d;
  d.values = gaussian(3, 5, 2);
  const auto r = center_and_reduce(d);
  EXPECT_EQ(r.rank, 2);
  EXPECT_EQ(r.scores.rows(), 3);
  EXPECT_EQ(r.scores.cols(), 2);
  const Matrix centered = d.values.rowwise() - d.values.colwise().mean();
  EXPECT_LT((pairwise_distances(r.scores) - pairwise_distances(centered)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(Reduce, RoundTripReproducesColumnMeansAndRows) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto [n, p] : {std::pair<Index, Index>{10, 30}, {30, 10}, {20, 20}}) {
      DataMatrix d;
      d.values = gaussian(n, p, seed, 3.0);
      d.values.col(0).array() += 7.0;
      const auto r = center_and_reduce(d);
      const Matrix back = r.to_original(r.scores);
      EXPECT_LT((back.colwise().mean() - d.values.colwise().mean()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((back - d.values).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Reduce, WideDataMatchesCovarianceOracle) {
  DataMatrix d;
  d.values = gaussian(50, 200, 3);
  const auto r = center_and_reduce(d);
  EXPECT_EQ(r.rank, 49);
  EXPECT_FALSE(r.identity_basis);
  EXPECT_LT((r.basis.transpose() * r.basis - Matrix::Identity(49, 49)).cwiseAbs().maxCoeff(),
            1e-10);

  const Vector reduced = covariance_eigenvalues_desc(r.scores);
  const Vector full = covariance_eigenvalues_desc(d.values);
  for (Index k = 0; k < 49; ++k) {
    EXPECT_NEAR(reduced(k), full(k), 1e-8 * full(0)) << k;
  }
}

TEST(Reduce, GramPreservation) {
  DataMatrix d;
  d.values = gaussian(25, 80, 4, 2.0);
  const auto r = center_and_reduce(d);
  const Matrix centered = d.values.rowwise() - d.values.colwise().mean();
  const Matrix g1 = r.scores * r.scores.transpose();
  const Matrix g2 = centered * centered.transpose();
  EXPECT_LT((g1 - g2).cwiseAbs().maxCoeff(), 1e-8 * g2.cwiseAbs().maxCoeff());
  const Matrix d1 = pairwise_distances(r.scores);
  const Matrix d2 = pairwise_distances(centered);
  EXPECT_LT((d1 - d2).cwiseAbs().maxCoeff(), 1e-8 * d2.maxCoeff());
}

TEST(Reduce, ReReducingIsStableUpToSign) {
  DataMatrix d;
  d.values = gaussian(20, 60, 5);
  const auto r1 = center_and_reduce(d);
  DataMatrix again;
  again.values = r1.to_original(r1.scores);
  const auto r2 = center_and_reduce(again);
  ASSERT_EQ(r1.rank, r2.rank);
  for (Index j = 0; j < r1.rank; ++j) {
    const double same = (r1.scores.col(j) - r2.scores.col(j)).cwiseAbs().maxCoeff();
    const double flip = (r1.scores.col(j) + r2.scores.col(j)).cwiseAbs().maxCoeff();
    EXPECT_LT(std::min(same, flip), 1e-10);
  }
}

TEST(Reduce, TallFullRankDataIsKeptAsIs) {
  DataMatrix d;
  d.values = gaussian(40, 6, 6);
  const auto r = center_and_reduce(d);
  EXPECT_TRUE(r.identity_basis);
  EXPECT_EQ(r.rank, 6);
  const Matrix centered = d.values.rowwise() - d.values.colwise().mean();
  EXPECT_LT((r.scores - centered).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Reduce, TallRankDeficientDataIsReduced) {
  DataMatrix d;
  const Matrix base = gaussian(40, 3, 7);
  const Matrix mix = gaussian(3, 6, 8);
  d.values = base * mix;
  const auto r = center_and_reduce(d);
  EXPECT_EQ(r.rank, 3);
  EXPECT_LT((r.to_original(r.scores) - d.values).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Reduce, ZeroVarianceIsDegenerate) {
  DataMatrix d;
  d.values = Matrix::Constant(5, 3, 2.5);
  EXPECT_THROW(center_and_reduce(d), DegenerateError);
}

TEST(PcaFit, PointsOnALineInR3) {
  const Vector dir = Vector::Random(3).normalized();
  Matrix x(10, 3);
  for (Index i = 0; i < 10; ++i) x.row(i) = (Vector::Constant(3, 1.0) + (i - 4.5) * dir).transpose();
  const auto m = pca_fit_on_subset(x, all_rows(10), 2, 3.0);
  EXPECT_NEAR(m.eigenvalues(1), 0.0, 1e-12);
  EXPECT_NEAR(abs_cos(m.loadings.col(0), dir), 1.0, 1e-10);
}

TEST(PcaFit, MatchesSampleCovarianceEigenvalues) {
  const Matrix x = gaussian_scaled(60, (Vector(4) << 3.0, 2.0, 1.0, 0.5).finished(), 9);
  const auto m = pca_fit_on_subset(x, all_rows(60), 4, std::sqrt(59.0));
  const Vector oracle = covariance_eigenvalues_desc(x);
  EXPECT_LT((m.eigenvalues - oracle).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((m.loadings.transpose() * m.loadings - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(),
            1e-10);
  for (Index j = 1; j < 4; ++j) EXPECT_GE(m.eigenvalues(j - 1), m.eigenvalues(j));
}

TEST(PcaFit, SubsetRowsOnly) {
  Matrix x = gaussian(20, 3, 10);
  x.row(19) *= 1e6;
  IndexSet h = all_rows(19);
  const auto m = pca_fit_on_subset(x, h, 2, std::sqrt(18.0));
  const auto oracle = pca_fit_on_subset(x.topRows(19), all_rows(19), 2, std::sqrt(18.0));
  EXPECT_LT((m.eigenvalues - oracle.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(m.subset, h);
}

TEST(PcaFit, RigidMotionEquivariance) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix x = gaussian_scaled(30, (Vector(5) << 4, 3, 2, 1, 0.5).finished(), seed);
    const Matrix r = random_rotation(5, seed + 100);
    const Vector b = gaussian(1, 5, seed + 200).row(0).transpose() * 10.0;
    Matrix y = x * r;
    y.rowwise() += b.transpose();
    const IndexSet h = all_rows(30);
    const auto m1 = pca_fit_on_subset(x, h, 3, std::sqrt(29.0));
    const auto m2 = pca_fit_on_subset(y, h, 3, std::sqrt(29.0));
    EXPECT_LT((m2.center - (r.transpose() * m1.center + b)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((m2.eigenvalues - m1.eigenvalues).cwiseAbs().maxCoeff(), 1e-8);
    const Matrix back = r * m2.loadings;
    for (Index j = 0; j < 3; ++j) EXPECT_NEAR(abs_cos(back.col(j), m1.loadings.col(j)), 1.0, 1e-8);
  }
}

TEST(PcaFit, SignConvention) {
  const Matrix x = gaussian(15, 4, 11);
  const auto m = pca_fit_on_subset(x, all_rows(15), 3, 1.0);
  for (Index j = 0; j < 3; ++j) {
    Index arg = 0;
    m.loadings.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(m.loadings(arg, j), 0.0);
  }
}

TEST(PcaFit, SubsetTooSmall) {
  const Matrix x = gaussian(10, 4, 12);
  EXPECT_THROW(pca_fit_on_subset(x, {0, 1}, 2, 1.0), InputError);
  EXPECT_NO_THROW(pca_fit_on_subset(x, {0, 1, 2}, 2, 1.0));
}

TEST(ClassicalPca, UsesAllRows) {
  const Matrix x = gaussian(25, 4, 13);
  const auto m = classical_pca(x, 2);
  EXPECT_EQ(m.method, FitMethod::Classical);
  EXPECT_EQ(m.subset.size(), 25u);
  EXPECT_NEAR(m.eigenvalues(0), covariance_eigenvalues_desc(x)(0), 1e-10);
}

TEST(FitMethod, StringRoundTrip) {
  for (auto m : {FitMethod::IIndex, FitMethod::ProjectionPursuit, FitMethod::Classical}) {
    EXPECT_EQ(fit_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(fit_method_from_string("mcd"), InputError);
}
