#pragma once

#include "fasthcs/common.hpp"

#include <optional>
#include <string_view>

namespace fasthcs {

enum class RowLabel : std::uint8_t { Clean, Outlier };

/// Raw n x p observations with optional ground-truth labels.
struct DataMatrix {
  Matrix values;
  std::optional<std::vector<RowLabel>> labels;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Throws InputError unless n >= 3, p >= 2, every entry is finite and
  /// labels (when present) have one entry per row.
  void validate() const;
};

/// Centered data expressed in an orthonormal basis of its row space.
///
/// Row i of `scores` satisfies  y_i = mean + basis * scores.row(i)^T, so all
/// pairwise distances and inner products of centered rows are preserved.
struct ReducedBasis {
  Matrix scores;  // n x r working data
  Vector mean;    // length p
  Matrix basis;   // p x r, orthonormal columns
  Index rank = 0;
  bool identity_basis = false;

  /// Maps working-space rows back to the original coordinates.
  Matrix to_original(const Matrix& working_rows) const;
};

enum class FitMethod : std::uint8_t { IIndex, ProjectionPursuit, Classical };

std::string_view to_string(FitMethod m);
FitMethod fit_method_from_string(std::string_view s);

/// Center, eigenvalues and loadings of a q-component PCA fit.
struct PcaModel {
  Vector center;       // length p
  Vector eigenvalues;  // length q, descending
  Matrix loadings;     // p x q, orthonormal columns
  IndexSet subset;
  FitMethod method = FitMethod::IIndex;

  Index q() const { return loadings.cols(); }
  Index dim() const { return loadings.rows(); }
};

/// Centers `data`; when the centered rows span fewer than p dimensions the
/// result is expressed in an r-dimensional orthonormal basis. For p > n the
/// basis comes from the eigendecomposition of the n x n Gram matrix.
ReducedBasis center_and_reduce(const DataMatrix& data);

/// PCA of rows `subset` of `data`: center is their mean, eigenvalues are
/// squared singular values of (rows - center) / scale_denominator.
/// Loading columns are signed so their largest-magnitude entry is positive.
PcaModel pca_fit_on_subset(const Matrix& data, const IndexSet& subset,
                           Index q, double scale_denominator);

/// Full-sample PCA with the usual n - 1 divisor.
PcaModel classical_pca(const Matrix& data, Index q);

/// Flips each column of `m` so that its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& m);

}  // namespace fasthcs
