#include "fasthcs/select.hpp"

#include "fasthcs/stats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fasthcs {

std::string Criterion::to_string() const {
  switch (state) {
    case State::PlusInfinity: return "+inf";
    case State::MinusInfinity: return "-inf";
    case State::Finite: break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Criterion Criterion::parse(const std::string& text) {
  Criterion c;
  if (text == "+inf") {
    c.state = State::PlusInfinity;
  } else if (text == "-inf") {
    c.state = State::MinusInfinity;
  } else {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, c.value);
    if (ec != std::errc() || ptr != end) {
      throw InputError("invalid criterion value '" + text + "'");
    }
  }
  return c;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(num / den) with log(0/0) = 0 and the signed infinities otherwise.
double log_ratio(double num, double den) {
  if (den > 0.0) return num > 0.0 ? std::log(num / den) : -kInf;
  return num > 0.0 ? kInf : 0.0;
}

std::vector<double> projections(const Matrix& data, const IndexSet& rows,
                                const Vector& direction) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (Index i : rows) out.push_back(data.row(i).dot(direction));
  return out;
}

double mean_square_about(const Matrix& data, const IndexSet& rows,
                         const Vector& center, const Vector& direction) {
  double acc = 0.0;
  for (Index i : rows) {
    const double s = (data.row(i) - center.transpose()).dot(direction);
    acc += s * s;
  }
  return acc / static_cast<double>(rows.size());
}

}  // namespace

Criterion selection_criterion(const Matrix& data, const PcaModel& fit_iindex,
                              const PcaModel& fit_pp) {
  const Index q = fit_iindex.q();
  const IndexSet both = set_intersection(fit_iindex.subset, fit_pp.subset);
  const IndexSet pp_only = set_difference(fit_pp.subset, fit_iindex.subset);
  if (static_cast<Index>(both.size()) < q) {
    throw DegenerateError("H^I and H^PP overlap in fewer than q rows");
  }

  Criterion c;
  double max_var = 0.0;
  if (pp_only.size() >= 2) {
    for (Index j = 0; j < q; ++j) {
      const auto proj = projections(data, pp_only, fit_pp.loadings.col(j));
      max_var = std::max(max_var, stats::sample_variance(proj));
    }
  }
  if (!(max_var > 0.0)) {
    c.variance_guard = true;
    c.state = Criterion::State::PlusInfinity;
    return c;
  }

  // Left: average over components; any +inf term dominates, then -inf.
  bool left_plus = false;
  bool left_minus = false;
  double left = 0.0;
  for (Index j = 0; j < q; ++j) {
    const Vector dir = fit_iindex.loadings.col(j);
    const double num = mean_square_about(data, fit_iindex.subset,
                                         fit_iindex.center, dir);
    const double den = stats::sample_variance(projections(data, both, dir));
    const double term = log_ratio(num, den);
    if (term == kInf) left_plus = true;
    else if (term == -kInf) left_minus = true;
    else left += term;
  }
  left /= static_cast<double>(q);

  // Right: maximum over components.
  double right = -kInf;
  for (Index j = 0; j < q; ++j) {
    const Vector dir = fit_pp.loadings.col(j);
    const double num = mean_square_about(data, both, fit_pp.center, dir);
    const double den = stats::sample_variance(projections(data, pp_only, dir));
    right = std::max(right, log_ratio(num, den));
  }

  if (left_plus) {
    c.state = Criterion::State::PlusInfinity;
  } else if (right == kInf || left_minus) {
    c.state = Criterion::State::MinusInfinity;
  } else if (right == -kInf) {
    c.state = Criterion::State::PlusInfinity;
  } else {
    c.value = left - right;
  }
  return c;
}

std::optional<IndexSet> detect_exact_fit(const PcaModel& model,
                                         const Matrix& data, double i_value,
                                         double tol) {
  if (!(i_value <= 1e-12)) return std::nullopt;
  const double trace = model.eigenvalues.sum();
  Index rank = 0;
  while (rank < model.q() && model.eigenvalues(rank) > tol * trace) ++rank;
  const Matrix span = model.loadings.leftCols(rank);
  const double cut = tol * trace;

  IndexSet rows;
  for (Index i = 0; i < data.rows(); ++i) {
    const RowVector c = data.row(i) - model.center.transpose();
    const RowVector resid = c - (c * span) * span.transpose();
    if (resid.squaredNorm() <= cut) rows.push_back(i);
  }
  if (rows.empty()) return std::nullopt;
  return rows;
}

SelectionOutcome select_final(const Matrix& data, const SearchResult& iindex,
                              const PPResult& pp) {
  SelectionOutcome out;
  out.d = selection_criterion(data, iindex.model, pp.model);
  out.chose_pp = out.d.selects_pp();
  out.model = out.chose_pp ? pp.model : iindex.model;
  out.exact_fit = detect_exact_fit(iindex.model, data, iindex.i_value);
  return out;
}

}  // namespace fasthcs
