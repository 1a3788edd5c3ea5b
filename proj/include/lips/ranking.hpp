#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lips/pattern.hpp"

namespace lips {

struct UncomputableRank : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2x2 table of (pattern, outcome): a = (1,1), b = (1,0), c = (0,1), d = (0,0).
struct ContingencyTable {
  long long a = 0, b = 0, c = 0, d = 0;

  long long total() const { return a + b + c + d; }
  long long min_cell() const { return std::min({a, b, c, d}); }
};

inline ContingencyTable contingency(const BitVector& pattern_col,
                                    const BitVector& y) {
  if (pattern_col.size() != y.size())
    throw std::invalid_argument("contingency: length mismatch");
  ContingencyTable t;
  t.a = static_cast<long long>(pattern_col.and_count(y));
  t.b = static_cast<long long>(pattern_col.count()) - t.a;
  t.c = static_cast<long long>(y.count()) - t.a;
  t.d = static_cast<long long>(y.size()) - t.a - t.b - t.c;
  return t;
}

enum class ZeroCellPolicy { haldane, error };

struct OddsRatio {
  double value = 1.0;
  bool corrected = false;  // Haldane-Anscombe +0.5 applied
};

inline OddsRatio odds_ratio(const ContingencyTable& t,
                            ZeroCellPolicy policy = ZeroCellPolicy::haldane) {
  if (t.min_cell() == 0) {
    if (policy == ZeroCellPolicy::error)
      throw UncomputableRank("contingency table has an empty cell");
    double a = static_cast<double>(t.a) + 0.5, b = static_cast<double>(t.b) + 0.5;
    double c = static_cast<double>(t.c) + 0.5, d = static_cast<double>(t.d) + 0.5;
    return {(a / b) / (c / d), true};
  }
  double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  return {(a / b) / (c / d), false};
}

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 on (0,1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile level outside (0,1)");
  static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q +
            C[5]) /
           ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q +
             C[5]) /
           ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) *
         q /
         (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1);
}

}  // namespace detail

// Woolf log-normal interval; Haldane correction applied first when the
// table has an empty cell.
inline std::pair<double, double> or_confidence_interval(
    const ContingencyTable& t, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must be in (0,1)");
  double shift = t.min_cell() == 0 ? 0.5 : 0.0;
  double a = static_cast<double>(t.a) + shift, b = static_cast<double>(t.b) + shift;
  double c = static_cast<double>(t.c) + shift, d = static_cast<double>(t.d) + shift;
  double lor = std::log((a / b) / (c / d));
  double se = std::sqrt(1 / a + 1 / b + 1 / c + 1 / d);
  double z = detail::normal_quantile((1 + gamma) / 2);
  return {std::exp(lor - z * se), std::exp(lor + z * se)};
}

enum class Direction { risk, protection, neutral };

struct RankedPattern {
  Pattern pattern;
  ContingencyTable table;
  double odds_ratio = 1.0;
  double log_abs_or = 0.0;  // |ln OR|
  Direction direction = Direction::neutral;
  bool corrected = false;
  std::optional<std::pair<double, double>> ci;
  double minority_support = 0.0;
  double majority_support = 0.0;
};

inline RankedPattern make_ranked(const Pattern& p, const ContingencyTable& t,
                                 ZeroCellPolicy policy = ZeroCellPolicy::haldane,
                                 double minority_support = 0.0,
                                 double majority_support = 0.0) {
  RankedPattern r;
  r.pattern = p;
  r.table = t;
  auto orr = odds_ratio(t, policy);
  r.odds_ratio = orr.value;
  r.corrected = orr.corrected;
  r.log_abs_or = std::fabs(std::log(orr.value));
  r.direction = orr.value > 1.0   ? Direction::risk
                : orr.value < 1.0 ? Direction::protection
                                  : Direction::neutral;
  r.minority_support = minority_support;
  r.majority_support = majority_support;
  return r;
}

// Deterministic rank comparison: descending |log OR|, then higher
// minority support, then fewer terms, then pattern text order.
inline bool rank_before(const RankedPattern& x, const RankedPattern& y) {
  if (x.log_abs_or != y.log_abs_or) return x.log_abs_or > y.log_abs_or;
  if (x.minority_support != y.minority_support)
    return x.minority_support > y.minority_support;
  if (x.pattern.size() != y.pattern.size())
    return x.pattern.size() < y.pattern.size();
  return x.pattern < y.pattern;
}

// Optionally drops patterns whose gamma-level CI contains 1, then sorts
// by descending |log OR| with the deterministic tie rule.
inline std::vector<RankedPattern> rank(std::vector<RankedPattern> candidates,
                                       std::optional<double> ci_gamma = {}) {
  if (ci_gamma) {
    std::vector<RankedPattern> kept;
    kept.reserve(candidates.size());
    for (auto& r : candidates) {
      auto ci = or_confidence_interval(r.table, *ci_gamma);
      r.ci = ci;
      if (ci.first <= 1.0 && 1.0 <= ci.second) continue;
      kept.push_back(std::move(r));
    }
    candidates = std::move(kept);
  }
  std::stable_sort(candidates.begin(), candidates.end(), rank_before);
  return candidates;
}

}  // namespace lips
