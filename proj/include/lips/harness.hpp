#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lips/dataset.hpp"
#include "lips/glm.hpp"
#include "lips/miner.hpp"
#include "lips/ranking.hpp"
#include "lips/selector.hpp"
#include "lips/simulator.hpp"

namespace lips {

// Mann-Whitney AUC: probability a random positive outscores a random
// negative, ties counted one half.
inline double auc(const std::vector<double>& scores,
                  const std::vector<int>& y) {
  if (scores.size() != y.size())
    throw std::invalid_argument("auc: length mismatch");
  std::size_t n1 = 0, n0 = 0;
  for (int v : y) (v ? n1 : n0)++;
  if (n1 == 0 || n0 == 0)
    throw std::invalid_argument("auc: single-class outcome");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double concordant = 0;
  std::size_t i = 0, neg_below = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    std::size_t pos_here = 0, neg_here = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (y[idx[j]] ? pos_here : neg_here)++;
      ++j;
    }
    concordant += static_cast<double>(pos_here) *
                  (static_cast<double>(neg_below) +
                   0.5 * static_cast<double>(neg_here));
    neg_below += neg_here;
    i = j;
  }
  return concordant / (static_cast<double>(n1) * static_cast<double>(n0));
}

// Confusion-matrix rates at a fixed threshold; empty denominators yield
// NaN so callers can exclude them from means explicitly.
struct ConfusionMetrics {
  double sensitivity = 0, specificity = 0, npv = 0, ppv = 0;
};

inline ConfusionMetrics confusion_metrics(const std::vector<double>& probs,
                                          const std::vector<int>& y,
                                          double threshold) {
  if (probs.size() != y.size())
    throw std::invalid_argument("confusion: length mismatch");
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    bool pred = probs[i] >= threshold;
    if (y[i] == 1)
      (pred ? tp : fn)++;
    else
      (pred ? fp : tn)++;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ConfusionMetrics m;
  m.sensitivity = (tp + fn) > 0 ? tp / (tp + fn) : nan;
  m.specificity = (tn + fp) > 0 ? tn / (tn + fp) : nan;
  m.npv = (tn + fn) > 0 ? tn / (tn + fn) : nan;
  m.ppv = (tp + fp) > 0 ? tp / (tp + fp) : nan;
  return m;
}

enum class Variant {
  lips,
  scores_lips,
  clusters_lips,
  top_lips,
  double_search_lips,
  lr_baseline,
  lasso_baseline
};

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::lips: return "lips";
    case Variant::scores_lips: return "scores_lips";
    case Variant::clusters_lips: return "clusters_lips";
    case Variant::top_lips: return "top_lips";
    case Variant::double_search_lips: return "double_search_lips";
    case Variant::lr_baseline: return "lr_baseline";
    default: return "lasso_baseline";
  }
}

inline Variant variant_from_name(const std::string& s) {
  for (Variant v : {Variant::lips, Variant::scores_lips, Variant::clusters_lips,
                    Variant::top_lips, Variant::double_search_lips,
                    Variant::lr_baseline, Variant::lasso_baseline})
    if (variant_name(v) == s) return v;
  throw std::invalid_argument("unknown variant: " + s);
}

enum class ThresholdPolicy { fixed, prevalence, youden };

struct SimulateSource {
  TilingConfig tiling;  // n here is the per-trial sample size
};

struct CsvSource {
  std::string path;
  std::string label_column;
  MissingPolicy missing = MissingPolicy::own_level;
};

struct ExperimentConfig {
  std::variant<SimulateSource, CsvSource> source;
  std::vector<Variant> variants = {Variant::lips};
  std::size_t K = 10;
  double supp_min = 0.1;
  std::optional<std::size_t> max_len;
  std::optional<double> ci_gamma;
  double lambda = 1e-5;
  std::size_t trials = 10;
  double split_fraction = 0.7;
  std::uint64_t seed = 0;
  ThresholdPolicy threshold_policy = ThresholdPolicy::fixed;
  double threshold_tau = 0.5;
  bool nearest_first_selection = false;  // argmin fidelity mode

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (K < 1) throw std::invalid_argument("K must be >= 1");
  }
};

struct TrialMetrics {
  double auc = std::numeric_limits<double>::quiet_NaN();
  double sensitivity = std::numeric_limits<double>::quiet_NaN();
  double specificity = std::numeric_limits<double>::quiet_NaN();
  double npv = std::numeric_limits<double>::quiet_NaN();
  double ppv = std::numeric_limits<double>::quiet_NaN();
  double n_terms = 0;
  double fit_seconds = 0;
};

struct SelectedPatternReport {
  std::string text;
  std::size_t step = 0;
  std::size_t min_distance = 0;
  Direction direction = Direction::neutral;
  std::string cluster_label;
  double odds_ratio = 1.0;
  double minority_support = 0.0;
  double majority_support = 0.0;
};

struct PipelineOutput {
  TrialMetrics metrics;
  FittedModel model;
  std::vector<SelectedPatternReport> selection;
  bool degenerate = false;  // no candidate patterns survived
};

namespace detail {

inline std::vector<double> indicator_column(const BitVector& bits) {
  std::vector<double> col(bits.size(), 0.0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits.get(i)) col[i] = 1.0;
  return col;
}

inline DesignMatrix make_design(const std::vector<std::string>& names,
                                const std::vector<std::vector<double>>& cols,
                                std::size_t n) {
  DesignMatrix d;
  d.names = names;
  d.X.resize(static_cast<Eigen::Index>(n),
             static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cols[j][i];
  return d;
}

inline double choose_threshold(ThresholdPolicy policy, double tau,
                               const std::vector<double>& train_probs,
                               const std::vector<int>& train_y) {
  switch (policy) {
    case ThresholdPolicy::fixed:
      return tau;
    case ThresholdPolicy::prevalence: {
      double m = 0;
      for (int v : train_y) m += v;
      return m / static_cast<double>(train_y.size());
    }
    default: {  // youden: maximize sensitivity + specificity - 1 on train
      std::vector<double> cands = train_probs;
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      double best_t = 0.5, best_j = -2;
      for (double t : cands) {
        auto m = confusion_metrics(train_probs, train_y, t);
        if (std::isnan(m.sensitivity) || std::isnan(m.specificity)) continue;
        double j = m.sensitivity + m.specificity - 1;
        if (j > best_j) {
          best_j = j;
          best_t = t;
        }
      }
      return best_t;
    }
  }
}

// Mines candidates, fills both class supports, builds contingency tables
// on all training rows and returns the rank-ready list.
inline std::vector<RankedPattern> candidate_patterns(
    const CategoricalDataset& train, const DummyMatrix& dm_train,
    const ExperimentConfig& cfg, bool both_classes) {
  auto [mino_idx, majo_idx] = class_partition(train);
  DummyMatrix dm_mino = restrict_rows(dm_train, mino_idx);
  DummyMatrix dm_majo = restrict_rows(dm_train, majo_idx);

  MinerConfig mc;
  mc.supp_min = cfg.supp_min;
  mc.max_len = cfg.max_len;

  std::vector<Pattern> patterns;
  std::unordered_set<Pattern, PatternHash> seen;
  auto add_all = [&](const std::vector<MinedPattern>& mined) {
    for (const auto& m : mined)
      if (seen.insert(m.pattern).second) patterns.push_back(m.pattern);
  };
  add_all(mine(dm_mino, mc));
  if (both_classes) add_all(mine(dm_majo, mc));

  auto mino_cols = support_matrix(patterns, dm_mino);
  auto majo_cols = support_matrix(patterns, dm_majo);
  auto full_cols = support_matrix(patterns, dm_train);
  BitVector y = outcome_bits(train);

  std::vector<RankedPattern> out;
  out.reserve(patterns.size());
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    double ms = static_cast<double>(mino_cols[k].count()) /
                static_cast<double>(dm_mino.n);
    double js = static_cast<double>(majo_cols[k].count()) /
                static_cast<double>(dm_majo.n);
    out.push_back(make_ranked(patterns[k], contingency(full_cols[k], y),
                              ZeroCellPolicy::haldane, ms, js));
  }
  return out;
}

}  // namespace detail

// Runs one variant of the pipeline: mine on training data, rank, select,
// build features, fit, then score on the held-out test rows. Test data
// enters only prediction and metrics.
inline PipelineOutput run_pipeline(const ExperimentConfig& cfg, Variant variant,
                                   const CategoricalDataset& train,
                                   const CategoricalDataset& test) {
  cfg.validate();
  PipelineOutput out;
  DummyMatrix dm_train = encode_dummies(train);
  DummyMatrix dm_test = encode_dummies(test);
  std::vector<double> y_train(train.outcome.begin(), train.outcome.end());

  std::vector<std::string> names;
  std::vector<std::vector<double>> cols_train, cols_test;

  if (variant == Variant::lr_baseline || variant == Variant::lasso_baseline) {
    for (std::size_t j = 0; j < dm_train.columns.size(); ++j) {
      Pattern p({dm_train.columns[j]});
      names.push_back(pattern_text(p, train));
      cols_train.push_back(detail::indicator_column(dm_train.cols[j]));
      cols_test.push_back(detail::indicator_column(dm_test.cols[j]));
    }
  } else {
    bool both = variant == Variant::double_search_lips;
    auto candidates = detail::candidate_patterns(train, dm_train, cfg, both);
    auto ranked = rank(std::move(candidates), cfg.ci_gamma);
    if (ranked.empty()) {
      out.degenerate = true;
    } else if (variant == Variant::scores_lips ||
               variant == Variant::clusters_lips) {
      auto [risk, prot] = split_risk_protection(ranked);
      std::size_t k_risk = (cfg.K + 1) / 2, k_prot = cfg.K / 2;
      SelectionResult rs, ps;
      if (!risk.empty())
        rs = select_dissimilar(risk, k_risk, cfg.nearest_first_selection);
      if (!prot.empty() && k_prot > 0)
        ps = select_dissimilar(prot, k_prot, cfg.nearest_first_selection);
      auto report = [&](const SelectionResult& sel, Direction dir,
                        const char* prefix,
                        const std::vector<std::vector<std::size_t>>* cover) {
        for (std::size_t i = 0; i < sel.selected.size(); ++i) {
          SelectedPatternReport r;
          r.text = pattern_text(sel.selected[i].pattern, train);
          r.step = i + 1;
          r.min_distance = sel.min_distance_at_selection[i];
          r.direction = dir;
          r.odds_ratio = sel.selected[i].odds_ratio;
          r.minority_support = sel.selected[i].minority_support;
          r.majority_support = sel.selected[i].majority_support;
          if (cover) {
            for (std::size_t c = 0; c < cover->size(); ++c)
              if (std::find((*cover)[c].begin(), (*cover)[c].end(), i) !=
                  (*cover)[c].end())
                r.cluster_label = prefix + std::to_string(c + 1);
          }
          out.selection.push_back(std::move(r));
        }
      };
      if (variant == Variant::scores_lips) {
        auto [r_tr, p_tr] = build_scores(rs.selected, ps.selected, dm_train);
        auto [r_te, p_te] = build_scores(rs.selected, ps.selected, dm_test);
        names = {"R", "P"};
        cols_train = {r_tr, p_tr};
        cols_test = {r_te, p_te};
        report(rs, Direction::risk, "R", nullptr);
        report(ps, Direction::protection, "P", nullptr);
      } else {
        auto cluster_side = [&](const SelectionResult& sel, const char* prefix,
                                Direction dir) {
          if (sel.selected.empty())
            return std::vector<std::vector<std::size_t>>{};
          std::vector<Pattern> ps_;
          std::vector<double> w;
          for (const auto& r : sel.selected) {
            ps_.push_back(r.pattern);
            w.push_back(r.log_abs_or);
          }
          auto cover = greedy_clique_cover(compatibility_graph(ps_), w);
          auto tr = build_cluster_scores(cover, ps_, dm_train);
          auto te = build_cluster_scores(cover, ps_, dm_test);
          for (std::size_t c = 0; c < cover.size(); ++c) {
            names.push_back(prefix + std::to_string(c + 1));
            cols_train.push_back(tr[c]);
            cols_test.push_back(te[c]);
          }
          report(sel, dir, prefix, &cover);
          return cover;
        };
        cluster_side(rs, "R", Direction::risk);
        cluster_side(ps, "P", Direction::protection);
      }
    } else {
      SelectionResult sel =
          variant == Variant::top_lips
              ? select_top(ranked, cfg.K)
              : select_dissimilar(ranked, cfg.K, cfg.nearest_first_selection);
      std::vector<Pattern> ps_;
      for (const auto& r : sel.selected) ps_.push_back(r.pattern);
      auto tr = support_matrix(ps_, dm_train);
      auto te = support_matrix(ps_, dm_test);
      for (std::size_t i = 0; i < sel.selected.size(); ++i) {
        names.push_back(pattern_text(sel.selected[i].pattern, train));
        cols_train.push_back(detail::indicator_column(tr[i]));
        cols_test.push_back(detail::indicator_column(te[i]));
        SelectedPatternReport r;
        r.text = names.back();
        r.step = i + 1;
        r.min_distance = sel.min_distance_at_selection[i];
        r.direction = sel.selected[i].direction;
        r.odds_ratio = sel.selected[i].odds_ratio;
        r.minority_support = sel.selected[i].minority_support;
        r.majority_support = sel.selected[i].majority_support;
        out.selection.push_back(std::move(r));
      }
    }
  }

  DesignMatrix X_train = detail::make_design(names, cols_train, train.n());
  DesignMatrix X_test = detail::make_design(names, cols_test, test.n());

  auto t0 = std::chrono::steady_clock::now();
  out.model = variant == Variant::lasso_baseline
                  ? fit_logistic_l1(X_train, y_train, cfg.lambda)
                  : fit_logistic(X_train, y_train);
  auto t1 = std::chrono::steady_clock::now();
  out.model.feature_recipe = variant_name(variant);

  auto train_probs = predict_proba(out.model, X_train);
  auto test_probs = predict_proba(out.model, X_test);
  double thr = detail::choose_threshold(cfg.threshold_policy,
                                        cfg.threshold_tau, train_probs,
                                        train.outcome);

  out.metrics.auc = auc(test_probs, test.outcome);
  auto cm = confusion_metrics(test_probs, test.outcome, thr);
  out.metrics.sensitivity = cm.sensitivity;
  out.metrics.specificity = cm.specificity;
  out.metrics.npv = cm.npv;
  out.metrics.ppv = cm.ppv;
  out.metrics.n_terms = variant == Variant::lasso_baseline
                            ? count_nonzero_terms(out.model)
                            : static_cast<double>(names.size());
  out.metrics.fit_seconds =
      std::chrono::duration<double>(t1 - t0).count();
  return out;
}

struct MetricSummary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = 0.0;
  std::size_t excluded = 0;  // NaN cells left out of the mean
};

struct VariantSummary {
  Variant variant = Variant::lips;
  MetricSummary auc, sensitivity, specificity, npv, ppv, n_terms,
      fit_seconds;
  std::vector<TrialMetrics> trials;
  std::size_t degenerate_trials = 0;
};

namespace detail {

inline MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary s;
  std::vector<double> v;
  for (double x : xs)
    if (std::isnan(x))
      ++s.excluded;
    else
      v.push_back(x);
  if (v.empty()) return s;
  double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  s.mean = mean;
  s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

inline VariantSummary summarize_variant(Variant v,
                                        std::vector<TrialMetrics> trials,
                                        std::size_t degenerate) {
  VariantSummary s;
  s.variant = v;
  auto pick = [&](auto member) {
    std::vector<double> xs;
    for (const auto& t : trials) xs.push_back(t.*member);
    return summarize(xs);
  };
  s.auc = pick(&TrialMetrics::auc);
  s.sensitivity = pick(&TrialMetrics::sensitivity);
  s.specificity = pick(&TrialMetrics::specificity);
  s.npv = pick(&TrialMetrics::npv);
  s.ppv = pick(&TrialMetrics::ppv);
  s.n_terms = pick(&TrialMetrics::n_terms);
  s.fit_seconds = pick(&TrialMetrics::fit_seconds);
  s.trials = std::move(trials);
  s.degenerate_trials = degenerate;
  return s;
}

inline CategoricalDataset trial_dataset(const ExperimentConfig& cfg,
                                        std::uint64_t trial_seed) {
  if (std::holds_alternative<SimulateSource>(cfg.source)) {
    TilingConfig tc = std::get<SimulateSource>(cfg.source).tiling;
    tc.seed = trial_seed;
    return generate(tc);
  }
  const auto& src = std::get<CsvSource>(cfg.source);
  return load_csv(src.path, src.label_column, src.missing);
}

}  // namespace detail

// Repeats the pipeline over per-trial seeds (fresh simulated data or
// fresh 70/30-style splits of a fixed CSV) and aggregates each variant.
inline std::vector<VariantSummary> run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::future<std::vector<PipelineOutput>>> futures;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::uint64_t trial_seed = cfg.seed + t;
    futures.push_back(std::async(std::launch::async, [cfg, trial_seed]() {
      CategoricalDataset ds = detail::trial_dataset(cfg, trial_seed);
      auto [train, test] = split(ds, cfg.split_fraction, trial_seed, true);
      std::vector<PipelineOutput> outs;
      for (Variant v : cfg.variants)
        outs.push_back(run_pipeline(cfg, v, train, test));
      return outs;
    }));
  }
  std::vector<std::vector<TrialMetrics>> per_variant(cfg.variants.size());
  std::vector<std::size_t> degenerate(cfg.variants.size(), 0);
  for (auto& f : futures) {
    auto outs = f.get();
    for (std::size_t vi = 0; vi < outs.size(); ++vi) {
      per_variant[vi].push_back(outs[vi].metrics);
      if (outs[vi].degenerate) ++degenerate[vi];
    }
  }
  std::vector<VariantSummary> summaries;
  for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi)
    summaries.push_back(detail::summarize_variant(
        cfg.variants[vi], std::move(per_variant[vi]), degenerate[vi]));
  return summaries;
}

enum class SweepAxis { sample_size, imbalance };

struct SweepPoint {
  double grid_value = 0;
  std::vector<VariantSummary> summaries;
};

// Robustness sweeps over the simulator source only. Each trial trains on
// a generated set of the requested size and evaluates on an independent
// generated test set of the same size and class mix (no splitting), so
// the grid value controls the training sample directly. The imbalance
// axis rejection-samples rows to the target minority fraction at fixed n.
inline std::vector<SweepPoint> sweep(const ExperimentConfig& cfg,
                                     SweepAxis axis,
                                     const std::vector<double>& grid) {
  cfg.validate();
  if (!std::holds_alternative<SimulateSource>(cfg.source))
    throw std::invalid_argument("sweep requires a simulator source");
  std::vector<SweepPoint> points;
  for (double g : grid) {
    SweepPoint pt;
    pt.grid_value = g;
    std::vector<std::future<std::vector<PipelineOutput>>> futures;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      std::uint64_t trial_seed = cfg.seed + t;
      futures.push_back(std::async(std::launch::async, [cfg, axis, g,
                                                        trial_seed]() {
        TilingConfig tc = std::get<SimulateSource>(cfg.source).tiling;
        const std::uint64_t test_seed = trial_seed + 0x7465737473656564ull;
        CategoricalDataset train, test;
        if (axis == SweepAxis::sample_size) {
          tc.n = static_cast<std::size_t>(g);
          tc.seed = trial_seed;
          train = generate(tc);
          tc.seed = test_seed;
          test = generate(tc);
        } else {
          tc.seed = trial_seed;
          train = generate_with_minority_fraction(tc, tc.n, g);
          tc.seed = test_seed;
          test = generate_with_minority_fraction(tc, tc.n, g);
        }
        std::vector<PipelineOutput> outs;
        for (Variant v : cfg.variants)
          outs.push_back(run_pipeline(cfg, v, train, test));
        return outs;
      }));
    }
    std::vector<std::vector<TrialMetrics>> per_variant(cfg.variants.size());
    std::vector<std::size_t> degenerate(cfg.variants.size(), 0);
    for (auto& f : futures) {
      auto outs = f.get();
      for (std::size_t vi = 0; vi < outs.size(); ++vi) {
        per_variant[vi].push_back(outs[vi].metrics);
        if (outs[vi].degenerate) ++degenerate[vi];
      }
    }
    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi)
      pt.summaries.push_back(detail::summarize_variant(
          cfg.variants[vi], std::move(per_variant[vi]), degenerate[vi]));
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace lips
