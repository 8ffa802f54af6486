#pragma once

#include "fasthcs/iindex.hpp"
#include "fasthcs/ppursuit.hpp"

#include <optional>
#include <string>

namespace fasthcs {

/// Value of the selection criterion D. Infinite outcomes are explicit
/// states rather than floating-point infinities.
struct Criterion {
  enum class State : std::uint8_t { Finite, PlusInfinity, MinusInfinity };

  State state = State::Finite;
  double value = 0.0;
  /// max_j var over H^PP \ H^I was zero (or H^PP \ H^I had fewer than two
  /// rows); projection pursuit is chosen regardless of D.
  bool variance_guard = false;

  bool selects_pp() const {
    return variance_guard || state == State::PlusInfinity ||
           (state == State::Finite && value > 0.0);
  }
  /// "+inf", "-inf" or the value with 17 significant digits.
  std::string to_string() const;
  static Criterion parse(const std::string& text);
};

/// D = mean_j log[ mean_{H^I} ((y - t^I).P^I_j)^2 / var_{H.}(y.P^I_j) ]
///   - max_j  log[ mean_{H.} ((y - t^PP).P^PP_j)^2 / var_{H-}(y.P^PP_j) ]
/// with H. = H^I n H^PP, H- = H^PP \ H^I and log(0/0) = 0. Subsets are taken
/// from the models.
Criterion selection_criterion(const Matrix& data, const PcaModel& fit_iindex,
                              const PcaModel& fit_pp);

struct SelectionOutcome {
  PcaModel model;  // final (t*, L*, P*) with subset H*
  Criterion d;
  bool chose_pp = false;
  std::optional<IndexSet> exact_fit;
};

/// Rows lying on the span of the model's non-null loadings, reported only
/// when the winning I-index is zero (<= 1e-12). A row is on the span when
/// its squared orthogonal residual is <= tol * sum(eigenvalues).
std::optional<IndexSet> detect_exact_fit(const PcaModel& model,
                                         const Matrix& data, double i_value,
                                         double tol = 1e-12);

SelectionOutcome select_final(const Matrix& data, const SearchResult& iindex,
                              const PPResult& pp);

}  // namespace fasthcs
