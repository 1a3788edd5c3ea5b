#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lips/bits.hpp"

namespace lips {

// One dummy variable: a (categorical variable, level) pair.
struct Term {
  int var = 0;
  int level = 0;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

// An interaction term: a product of dummies, at most one per variable.
// The empty pattern is the constant-one interaction.
class Pattern {
 public:
  Pattern() = default;

  explicit Pattern(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      if (terms_[i].var == terms_[i - 1].var)
        throw std::invalid_argument(
            "pattern contains two levels of one variable");
    }
  }

  static Pattern of(std::initializer_list<Term> terms) {
    return Pattern(std::vector<Term>(terms));
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;

 private:
  std::vector<Term> terms_;  // sorted by var, vars distinct
};

inline bool is_subinteraction(const Pattern& t, const Pattern& s) {
  return std::includes(s.terms().begin(), s.terms().end(), t.terms().begin(),
                       t.terms().end());
}

inline Pattern mcd(const Pattern& t, const Pattern& s) {
  std::vector<Term> common;
  std::set_intersection(t.terms().begin(), t.terms().end(), s.terms().begin(),
                        s.terms().end(), std::back_inserter(common));
  return Pattern(std::move(common));
}

inline bool incompatible(const Pattern& t, const Pattern& s) {
  auto it = t.terms().begin(), is = s.terms().begin();
  while (it != t.terms().end() && is != s.terms().end()) {
    if (it->var == is->var) {
      if (it->level != is->level) return true;
      ++it, ++is;
    } else if (it->var < is->var) {
      ++it;
    } else {
      ++is;
    }
  }
  return false;
}

// Semi-metric on patterns: max size when incompatible, otherwise
// max size minus the size of the maximum common divisor.
inline std::size_t dissimilarity(const Pattern& t, const Pattern& s) {
  std::size_t m = std::max(t.size(), s.size());
  if (incompatible(t, s)) return m;
  return m - mcd(t, s).size();
}

struct PatternHash {
  std::size_t operator()(const Pattern& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& t : p.terms()) {
      h ^= std::hash<long long>()((static_cast<long long>(t.var) << 32) |
                                  static_cast<unsigned>(t.level)) +
           0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Column-major binary dummy matrix: one bit column per (variable, level).
struct DummyMatrix {
  std::size_t n = 0;
  std::vector<Term> columns;     // (var, level) per column
  std::vector<BitVector> cols;   // each of length n

  int column_index(const Term& t) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (columns[j] == t) return static_cast<int>(j);
    return -1;
  }
};

// Conjunction of dummy columns; empty pattern is all ones.
inline BitVector evaluate(const Pattern& t, const DummyMatrix& dm) {
  BitVector out(dm.n, true);
  for (const auto& term : t.terms()) {
    int j = dm.column_index(term);
    if (j < 0) throw std::out_of_range("pattern term not in dummy matrix");
    out &= dm.cols[j];
  }
  return out;
}

// d x L incompatibility matrix: bit (i, k) set iff dummy i cannot
// co-occur with pattern k.
struct IncompatibilityMatrix {
  std::size_t d = 0;
  std::vector<BitVector> pattern_cols;  // one column of length d per pattern
};

inline IncompatibilityMatrix incompatibility_matrix(
    const std::vector<Pattern>& patterns, const DummyMatrix& dm) {
  IncompatibilityMatrix m;
  m.d = dm.columns.size();
  m.pattern_cols.reserve(patterns.size());
  for (const auto& p : patterns) {
    BitVector col(m.d);
    for (std::size_t i = 0; i < m.d; ++i) {
      for (const auto& term : p.terms()) {
        if (dm.columns[i].var == term.var &&
            dm.columns[i].level != term.level) {
          col.set(i);
          break;
        }
      }
    }
    m.pattern_cols.push_back(std::move(col));
  }
  return m;
}

// Bulk support evaluation as the negated boolean product Z * M:
// a row misses a pattern exactly when it carries a dummy incompatible
// with it, so each output column is the negated OR of the incompatible
// dummy columns.
inline std::vector<BitVector> support_matrix(
    const std::vector<Pattern>& patterns, const DummyMatrix& dm) {
  IncompatibilityMatrix m = incompatibility_matrix(patterns, dm);
  std::vector<BitVector> out;
  out.reserve(patterns.size());
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    BitVector acc(dm.n);
    for (std::size_t i = 0; i < m.d; ++i)
      if (m.pattern_cols[k].get(i)) acc |= dm.cols[i];
    out.push_back(~acc);
  }
  return out;
}

// Text form: `var=level` terms joined by `&`; the empty pattern prints
// as the top symbol.
inline std::string to_text(const Pattern& p,
                           const std::vector<std::string>* names = nullptr) {
  if (p.empty()) return "⊤";
  std::string s;
  for (const auto& t : p.terms()) {
    if (!s.empty()) s += '&';
    if (names)
      s += (*names)[static_cast<std::size_t>(t.var)];
    else
      s += 'x' + std::to_string(t.var);
    s += '=';
    s += std::to_string(t.level);
  }
  return s;
}

}  // namespace lips
