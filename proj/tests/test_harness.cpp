#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lips/harness.hpp"

using namespace lips;
using Catch::Matchers::WithinAbs;

TEST_CASE("auc basics") {
  // pairs: (0.9,0.6) and (0.9,0.4) concordant, (0.4,0.6) discordant,
  // (0.4,0.4) tied
  CHECK_THAT(auc({0.9, 0.4, 0.6, 0.4}, {1, 1, 0, 0}),
             WithinAbs((1.0 + 1.0 + 0.0 + 0.5) / 4.0, 1e-12));
  CHECK_THAT(auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}), WithinAbs(1.0, 1e-12));
  CHECK_THAT(auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}), WithinAbs(0.0, 1e-12));
  // a constant score cannot rank anything
  CHECK_THAT(auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}), WithinAbs(0.5, 1e-12));
  CHECK_THROWS(auc({0.5}, {1}));
  CHECK_THROWS(auc({0.5, 0.4}, {1}));
}

TEST_CASE("auc is invariant under monotone transforms") {
  std::vector<double> s = {0.11, 0.52, 0.03, 0.78, 0.41, 0.99, 0.41};
  std::vector<int> y = {0, 1, 0, 1, 0, 1, 1};
  double base = auc(s, y);
  std::vector<double> t;
  for (double v : s) t.push_back(std::exp(3.0 * v) - 5.0);
  CHECK_THAT(auc(t, y), WithinAbs(base, 1e-12));
  // complementing the scores flips the ranking
  std::vector<double> neg;
  for (double v : s) neg.push_back(-v);
  CHECK_THAT(auc(neg, y), WithinAbs(1.0 - base, 1e-12));
}

TEST_CASE("confusion metrics at a threshold") {
  std::vector<double> p = {0.9, 0.6, 0.4, 0.2};
  std::vector<int> y = {1, 0, 1, 0};
  auto m = confusion_metrics(p, y, 0.5);
  CHECK_THAT(m.sensitivity, WithinAbs(0.5, 1e-12));  // tp=1 fn=1
  CHECK_THAT(m.specificity, WithinAbs(0.5, 1e-12));  // tn=1 fp=1
  CHECK_THAT(m.ppv, WithinAbs(0.5, 1e-12));
  CHECK_THAT(m.npv, WithinAbs(0.5, 1e-12));

  // an always-negative rule has an empty predicted-positive cell
  auto quiet = confusion_metrics({0.1, 0.2, 0.3}, {1, 0, 0}, 0.9);
  CHECK(std::isnan(quiet.ppv));
  CHECK_THAT(quiet.sensitivity, WithinAbs(0.0, 1e-12));
  CHECK_THAT(quiet.specificity, WithinAbs(1.0, 1e-12));
}

TEST_CASE("summarize excludes NaN cells") {
  auto s = detail::summarize({1.0, std::nan(""), 3.0});
  CHECK_THAT(s.mean, WithinAbs(2.0, 1e-12));
  CHECK(s.excluded == 1);
  CHECK_THAT(s.sd, WithinAbs(std::sqrt(2.0), 1e-12));
  auto empty = detail::summarize({std::nan("")});
  CHECK(std::isnan(empty.mean));
  CHECK(empty.excluded == 1);
}

TEST_CASE("threshold policies") {
  std::vector<double> probs = {0.1, 0.2, 0.7, 0.9};
  std::vector<int> y = {0, 0, 1, 1};
  CHECK(detail::choose_threshold(ThresholdPolicy::fixed, 0.42, probs, y) ==
        0.42);
  CHECK_THAT(
      detail::choose_threshold(ThresholdPolicy::prevalence, 0.5, probs, y),
      WithinAbs(0.5, 1e-12));
  // youden picks a cut that separates this perfectly separable data
  double t = detail::choose_threshold(ThresholdPolicy::youden, 0.5, probs, y);
  auto m = confusion_metrics(probs, y, t);
  CHECK(m.sensitivity == 1.0);
  CHECK(m.specificity == 1.0);
}

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::lips, Variant::scores_lips, Variant::clusters_lips,
                    Variant::top_lips, Variant::double_search_lips,
                    Variant::lr_baseline, Variant::lasso_baseline})
    CHECK(variant_from_name(variant_name(v)) == v);
  CHECK_THROWS_AS(variant_from_name("nope"), std::invalid_argument);
}

namespace {

ExperimentConfig small_sim_config() {
  ExperimentConfig cfg;
  SimulateSource src;
  src.tiling.n = 1200;
  cfg.source = src;
  cfg.K = 6;
  cfg.supp_min = 0.1;
  cfg.max_len = 3;
  cfg.trials = 2;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("pipeline runs are deterministic") {
  auto cfg = small_sim_config();
  auto ds = detail::trial_dataset(cfg, 7);
  auto [train, test] = split(ds, 0.7, 7, true);
  auto a = run_pipeline(cfg, Variant::lips, train, test);
  auto b = run_pipeline(cfg, Variant::lips, train, test);
  CHECK(a.metrics.auc == b.metrics.auc);
  REQUIRE(a.selection.size() == b.selection.size());
  for (std::size_t i = 0; i < a.selection.size(); ++i)
    CHECK(a.selection[i].text == b.selection[i].text);
  CHECK(a.model.coefficients == b.model.coefficients);
  CHECK(a.metrics.n_terms == static_cast<double>(a.selection.size()));
}

TEST_CASE("lr_baseline uses every dummy level") {
  auto cfg = small_sim_config();
  auto ds = detail::trial_dataset(cfg, 11);
  auto [train, test] = split(ds, 0.7, 11, true);
  auto out = run_pipeline(cfg, Variant::lr_baseline, train, test);
  CHECK(out.metrics.n_terms == 20.0);  // ten binary variables, two levels
  CHECK(out.selection.empty());
  CHECK(out.model.feature_recipe == "lr_baseline");
}

TEST_CASE("lasso_baseline counts surviving terms") {
  auto cfg = small_sim_config();
  cfg.lambda = 0.02;
  auto ds = detail::trial_dataset(cfg, 13);
  auto [train, test] = split(ds, 0.7, 13, true);
  auto out = run_pipeline(cfg, Variant::lasso_baseline, train, test);
  CHECK(out.metrics.n_terms <= 20.0);
  CHECK(out.metrics.n_terms ==
        static_cast<double>(count_nonzero_terms(out.model)));
}

TEST_CASE("scores variant produces the two-column model") {
  auto cfg = small_sim_config();
  auto ds = detail::trial_dataset(cfg, 17);
  auto [train, test] = split(ds, 0.7, 17, true);
  auto out = run_pipeline(cfg, Variant::scores_lips, train, test);
  CHECK(out.metrics.n_terms <= 2.0);
  CHECK(out.selection.size() <= cfg.K);
}

TEST_CASE("clusters variant labels each selected pattern") {
  auto cfg = small_sim_config();
  auto ds = detail::trial_dataset(cfg, 19);
  auto [train, test] = split(ds, 0.7, 19, true);
  auto out = run_pipeline(cfg, Variant::clusters_lips, train, test);
  for (const auto& s : out.selection) CHECK_FALSE(s.cluster_label.empty());
  CHECK(out.metrics.n_terms <= static_cast<double>(out.selection.size()));
}

TEST_CASE("run_trials aggregates per-trial pipeline outputs") {
  auto cfg = small_sim_config();
  cfg.variants = {Variant::lips, Variant::lr_baseline};
  auto summaries = run_trials(cfg);
  REQUIRE(summaries.size() == 2);
  CHECK(summaries[0].variant == Variant::lips);
  CHECK(summaries[0].trials.size() == cfg.trials);

  // the aggregate is exactly the summary of the per-trial values
  std::vector<double> aucs;
  for (const auto& t : summaries[0].trials) aucs.push_back(t.auc);
  auto direct = detail::summarize(aucs);
  CHECK(summaries[0].auc.mean == direct.mean);
  CHECK(summaries[0].auc.sd == direct.sd);

  // and it is reproducible
  auto again = run_trials(cfg);
  CHECK(again[0].auc.mean == summaries[0].auc.mean);
  CHECK(again[1].auc.mean == summaries[1].auc.mean);
}

TEST_CASE("sweep varies one axis of the simulator") {
  auto cfg = small_sim_config();
  cfg.trials = 1;
  auto pts = sweep(cfg, SweepAxis::sample_size, {400, 800});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].grid_value == 400);
  CHECK(pts[1].summaries.size() == 1);

  auto imb = sweep(cfg, SweepAxis::imbalance, {0.3});
  REQUIRE(imb.size() == 1);
  CHECK(imb[0].summaries[0].trials.size() == 1);

  ExperimentConfig csv_cfg = cfg;
  csv_cfg.source = CsvSource{"/tmp/none.csv", "y"};
  CHECK_THROWS_AS(sweep(csv_cfg, SweepAxis::sample_size, {100}),
                  std::invalid_argument);
}
