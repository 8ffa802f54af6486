#include "fasthcs/reduce.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <string>

namespace fasthcs {

void DataMatrix::validate() const {
  if (values.rows() < 3) {
    throw InputError("data needs at least 3 rows, got " +
                     std::to_string(values.rows()));
  }
  if (values.cols() < 2) {
    throw InputError("data needs at least 2 columns, got " +
                     std::to_string(values.cols()));
  }
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index i = 0; i < values.rows(); ++i) {
      if (!std::isfinite(values(i, j))) {
        throw InputError("non-finite value at row " + std::to_string(i) +
                         ", column " + std::to_string(j));
      }
    }
  }
  if (labels && static_cast<Index>(labels->size()) != values.rows()) {
    throw InputError("label count does not match row count");
  }
}

Matrix ReducedBasis::to_original(const Matrix& working_rows) const {
  Matrix out = working_rows * basis.transpose();
  out.rowwise() += mean.transpose();
  return out;
}

std::string_view to_string(FitMethod m) {
  switch (m) {
    case FitMethod::IIndex: return "iindex";
    case FitMethod::ProjectionPursuit: return "projection_pursuit";
    case FitMethod::Classical: return "classical";
  }
  return "unknown";
}

FitMethod fit_method_from_string(std::string_view s) {
  if (s == "iindex") return FitMethod::IIndex;
  if (s == "projection_pursuit") return FitMethod::ProjectionPursuit;
  if (s == "classical") return FitMethod::Classical;
  throw InputError("unknown fit method '" + std::string(s) + "'");
}

void canonicalize_signs(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    Index arg = 0;
    m.col(j).cwiseAbs().maxCoeff(&arg);
    if (m(arg, j) < 0.0) m.col(j) *= -1.0;
  }
}

namespace {

// Eigenpairs of a symmetric PSD matrix, descending, truncated to the
// numerical rank (eigenvalue > largest * n * 1e-12).
struct RankedEigen {
  Vector values;
  Matrix vectors;
};

RankedEigen ranked_eigen(const Matrix& sym, Index n) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw DegenerateError("eigendecomposition failed to converge");
  }
  const Vector& ev = solver.eigenvalues();  // ascending
  const Index dim = ev.size();
  const double largest = ev(dim - 1);
  if (!(largest > 0.0)) {
    throw DegenerateError("data has zero variance (all rows identical)");
  }
  const double tol = largest * static_cast<double>(n) * 1e-12;
  Index r = 0;
  while (r < dim && ev(dim - 1 - r) > tol) ++r;

  RankedEigen out;
  out.values.resize(r);
  out.vectors.resize(dim, r);
  for (Index k = 0; k < r; ++k) {
    out.values(k) = ev(dim - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(dim - 1 - k);
  }
  return out;
}

// Makes each column of `working` canonical and applies the same flips to
// the matching columns of `basis`.
void canonicalize_pair(Matrix& working, Matrix& basis) {
  for (Index j = 0; j < working.cols(); ++j) {
    Index arg = 0;
    working.col(j).cwiseAbs().maxCoeff(&arg);
    if (working(arg, j) < 0.0) {
      working.col(j) *= -1.0;
      basis.col(j) *= -1.0;
    }
  }
}

}  // namespace

ReducedBasis center_and_reduce(const DataMatrix& data) {
  data.validate();
  const Index n = data.rows();
  const Index p = data.cols();

  ReducedBasis out;
  out.mean = data.values.colwise().mean().transpose();
  Matrix centered = data.values.rowwise() - out.mean.transpose();
  if (centered.squaredNorm() == 0.0) {
    throw DegenerateError("data has zero variance (all rows identical)");
  }

  if (p > n) {
    const Matrix gram = centered * centered.transpose();
    RankedEigen eig = ranked_eigen(gram, n);
    const Vector root = eig.values.cwiseSqrt();
    out.scores = eig.vectors * root.asDiagonal();
    out.basis = centered.transpose() * eig.vectors *
                root.cwiseInverse().asDiagonal();
    out.rank = eig.values.size();
    canonicalize_pair(out.scores, out.basis);
    return out;
  }

  const Matrix scatter = centered.transpose() * centered;
  RankedEigen eig = ranked_eigen(scatter, n);
  out.rank = eig.values.size();
  if (out.rank == p) {
    out.scores = std::move(centered);
    out.basis = Matrix::Identity(p, p);
    out.identity_basis = true;
    return out;
  }
  out.basis = eig.vectors;
  out.scores = centered * out.basis;
  canonicalize_pair(out.scores, out.basis);
  return out;
}

PcaModel pca_fit_on_subset(const Matrix& data, const IndexSet& subset,
                           Index q, double scale_denominator) {
  const Index m = static_cast<Index>(subset.size());
  if (q < 1) throw ConfigError("number of components must be at least 1");
  if (m < q + 1) {
    throw InputError("subset of size " + std::to_string(m) +
                     " is too small for " + std::to_string(q) +
                     " components (needs at least q + 1 rows)");
  }
  if (q > data.cols()) {
    throw ConfigError("more components requested than data dimensions");
  }
  if (!(scale_denominator > 0.0)) {
    throw ConfigError("scale denominator must be positive");
  }

  PcaModel model;
  model.subset = subset;
  Matrix rows = gather_rows(data, subset);
  model.center = rows.colwise().mean().transpose();
  rows.rowwise() -= model.center.transpose();
  rows /= scale_denominator;

  Eigen::BDCSVD<Matrix> svd(rows, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  model.eigenvalues.resize(q);
  for (Index j = 0; j < q; ++j) {
    model.eigenvalues(j) = j < sv.size() ? sv(j) * sv(j) : 0.0;
  }
  model.loadings = svd.matrixV().leftCols(q);
  canonicalize_signs(model.loadings);
  return model;
}

PcaModel classical_pca(const Matrix& data, Index q) {
  IndexSet all(static_cast<std::size_t>(data.rows()));
  std::iota(all.begin(), all.end(), Index{0});
  PcaModel model = pca_fit_on_subset(
      data, all, q, std::sqrt(static_cast<double>(data.rows() - 1)));
  model.method = FitMethod::Classical;
  return model;
}

}  // namespace fasthcs
