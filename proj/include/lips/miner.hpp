#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lips/pattern.hpp"

namespace lips {

enum class SearchClasses { minority_only, both_classes };

struct MinerConfig {
  double supp_min = 0.1;  // strict threshold: emitted iff freq > supp_min
  std::optional<std::size_t> max_len;
  SearchClasses search_classes = SearchClasses::minority_only;

  void validate() const {
    if (!(supp_min > 0.0 && supp_min <= 1.0))
      throw std::invalid_argument("supp_min must be in (0,1]");
    if (max_len && *max_len < 1)
      throw std::invalid_argument("max_len must be >= 1");
  }
};

struct MinedPattern {
  Pattern pattern;
  double minority_support = 0.0;
  double majority_support = 0.0;
};

namespace detail {

struct Node {
  Pattern pattern;
  BitVector rows;  // rows supporting the pattern
};

// Smallest count c with c / n > supp_min, robust to the fact that
// supp_min * n may land a hair on either side of an integer.
inline std::size_t strict_min_count(double supp_min, std::size_t n) {
  std::size_t c = static_cast<std::size_t>(supp_min * static_cast<double>(n));
  while (static_cast<double>(c) <= supp_min * static_cast<double>(n)) ++c;
  while (c > 0 &&
         static_cast<double>(c - 1) > supp_min * static_cast<double>(n))
    --c;
  return c;
}

}  // namespace detail

// Levelwise Apriori over the rows of dm (already restricted to the class
// being searched). Supports are counted by bitset intersection; a
// (k+1)-candidate is joined from two frequent k-patterns sharing their
// first k-1 terms and pruned unless every k-subpattern is frequent.
// Candidates joining two levels of one variable are never generated.
inline std::vector<MinedPattern> mine(const DummyMatrix& dm,
                                      const MinerConfig& cfg) {
  cfg.validate();
  if (dm.n == 0) throw std::invalid_argument("mine: empty row set");
  const double nn = static_cast<double>(dm.n);
  const std::size_t min_count = detail::strict_min_count(cfg.supp_min, dm.n);

  std::vector<MinedPattern> out;
  std::vector<detail::Node> level;
  for (std::size_t j = 0; j < dm.cols.size(); ++j) {
    if (dm.cols[j].count() >= min_count)
      level.push_back({Pattern({dm.columns[j]}), dm.cols[j]});
  }
  std::size_t k = 1;
  std::unordered_set<Pattern, PatternHash> frequent;
  while (!level.empty()) {
    for (const auto& node : level) {
      out.push_back({node.pattern,
                     static_cast<double>(node.rows.count()) / nn, 0.0});
      frequent.insert(node.pattern);
    }
    if (cfg.max_len && k >= *cfg.max_len) break;
    std::vector<detail::Node> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const auto& ta = level[a].pattern.terms();
        const auto& tb = level[b].pattern.terms();
        bool share_prefix = true;
        for (std::size_t i = 0; i + 1 < k; ++i)
          if (ta[i] != tb[i]) {
            share_prefix = false;
            break;
          }
        if (!share_prefix) continue;
        if (ta.back().var == tb.back().var) continue;  // incompatible join
        std::vector<Term> joined(ta);
        joined.push_back(tb.back());
        Pattern cand(std::move(joined));
        // prune: every k-subpattern must be frequent
        bool prunable = false;
        for (std::size_t drop = 0; drop < cand.size() && !prunable; ++drop) {
          std::vector<Term> sub;
          for (std::size_t i = 0; i < cand.size(); ++i)
            if (i != drop) sub.push_back(cand.terms()[i]);
          if (!frequent.count(Pattern(std::move(sub)))) prunable = true;
        }
        if (prunable) continue;
        BitVector rows = level[a].rows & level[b].rows;
        if (rows.count() >= min_count)
          next.push_back({std::move(cand), std::move(rows)});
      }
    }
    level = std::move(next);
    ++k;
  }
  return out;
}

// Exhaustive enumeration used as the mining oracle; guarded against
// dimensional blowup.
inline std::vector<MinedPattern> brute_force_frequent(const DummyMatrix& dm,
                                                      const MinerConfig& cfg) {
  cfg.validate();
  if (dm.n == 0) throw std::invalid_argument("empty row set");
  if (dm.cols.size() > 30)
    throw std::invalid_argument("brute force guard: d > 30");
  const double nn = static_cast<double>(dm.n);
  const std::size_t min_count = detail::strict_min_count(cfg.supp_min, dm.n);
  std::vector<MinedPattern> out;
  std::vector<Term> stack;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!stack.empty()) {
      Pattern p(stack);
      std::size_t count = evaluate(p, dm).count();
      if (count >= min_count)
        out.push_back({p, static_cast<double>(count) / nn, 0.0});
      else
        return;  // downward closure: no superpattern can pass
      if (cfg.max_len && stack.size() >= *cfg.max_len) return;
    }
    for (std::size_t j = from; j < dm.cols.size(); ++j) {
      if (!stack.empty() && stack.back().var == dm.columns[j].var) continue;
      bool clash = false;
      for (const auto& t : stack)
        if (t.var == dm.columns[j].var) clash = true;
      if (clash) continue;
      stack.push_back(dm.columns[j]);
      self(self, j + 1);
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Fills majority-class frequencies via the bulk support path.
inline std::vector<MinedPattern> attach_majority_support(
    std::vector<MinedPattern> mined, const DummyMatrix& dm_majority) {
  std::vector<Pattern> ps;
  ps.reserve(mined.size());
  for (const auto& m : mined) ps.push_back(m.pattern);
  auto cols = support_matrix(ps, dm_majority);
  for (std::size_t i = 0; i < mined.size(); ++i)
    mined[i].majority_support =
        static_cast<double>(cols[i].count()) /
        static_cast<double>(dm_majority.n);
  return mined;
}

}  // namespace lips
