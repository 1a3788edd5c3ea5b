#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "lips/harness.hpp"

namespace lips {

// JSON mirror of ExperimentConfig, consumed by `run --config` and
// `sweep --config`.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  const auto& src = j.at("source");
  std::string type = src.at("type").get<std::string>();
  if (type == "simulate") {
    SimulateSource s;
    if (src.contains("n")) s.tiling.n = src.at("n").get<std::size_t>();
    if (src.contains("red_left"))
      s.tiling.red_left = std::set<int>(src.at("red_left").begin(),
                                        src.at("red_left").end());
    if (src.contains("red_right"))
      s.tiling.red_right = std::set<int>(src.at("red_right").begin(),
                                         src.at("red_right").end());
    if (src.contains("p_tilde")) s.tiling.p_tilde = src.at("p_tilde");
    if (src.contains("q_tilde")) s.tiling.q_tilde = src.at("q_tilde");
    cfg.source = s;
  } else if (type == "csv") {
    CsvSource s;
    s.path = src.at("path").get<std::string>();
    s.label_column = src.at("label").get<std::string>();
    if (src.contains("missing"))
      s.missing = src.at("missing") == "drop" ? MissingPolicy::drop_row
                                              : MissingPolicy::own_level;
    cfg.source = s;
  } else {
    throw std::invalid_argument("source.type must be simulate or csv");
  }

  cfg.variants.clear();
  if (j.contains("variants"))
    for (const auto& v : j.at("variants"))
      cfg.variants.push_back(variant_from_name(v.get<std::string>()));
  else if (j.contains("variant"))
    cfg.variants.push_back(
        variant_from_name(j.at("variant").get<std::string>()));
  else
    cfg.variants.push_back(Variant::lips);

  if (j.contains("K")) cfg.K = j.at("K").get<std::size_t>();
  if (j.contains("supp_min")) cfg.supp_min = j.at("supp_min");
  if (j.contains("max_len") && !j.at("max_len").is_null())
    cfg.max_len = j.at("max_len").get<std::size_t>();
  if (j.contains("ci_gamma") && !j.at("ci_gamma").is_null())
    cfg.ci_gamma = j.at("ci_gamma").get<double>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda");
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
  if (j.contains("split_fraction")) cfg.split_fraction = j.at("split_fraction");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threshold")) {
    const auto& t = j.at("threshold");
    if (t.is_string()) {
      std::string p = t.get<std::string>();
      if (p == "prevalence")
        cfg.threshold_policy = ThresholdPolicy::prevalence;
      else if (p == "youden")
        cfg.threshold_policy = ThresholdPolicy::youden;
      else
        throw std::invalid_argument("unknown threshold policy: " + p);
    } else {
      std::string p = t.at("policy").get<std::string>();
      if (p == "fixed") {
        cfg.threshold_policy = ThresholdPolicy::fixed;
        if (t.contains("tau")) cfg.threshold_tau = t.at("tau");
      } else if (p == "prevalence") {
        cfg.threshold_policy = ThresholdPolicy::prevalence;
      } else if (p == "youden") {
        cfg.threshold_policy = ThresholdPolicy::youden;
      } else {
        throw std::invalid_argument("unknown threshold policy: " + p);
      }
    }
  }
  if (j.contains("nearest_first_selection"))
    cfg.nearest_first_selection = j.at("nearest_first_selection");
  cfg.validate();
  return cfg;
}

inline nlohmann::json selection_to_json(const PipelineOutput& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : out.selection) {
    arr.push_back({{"pattern", s.text},
                   {"step", s.step},
                   {"min_distance_at_selection", s.min_distance},
                   {"direction", s.direction == Direction::risk ? "risk"
                                 : s.direction == Direction::protection
                                     ? "protection"
                                     : "neutral"},
                   {"cluster", s.cluster_label},
                   {"odds_ratio", s.odds_ratio},
                   {"minority_support", s.minority_support},
                   {"majority_support", s.majority_support}});
  }
  return {{"degenerate", out.degenerate}, {"selected", arr}};
}

inline nlohmann::json model_to_json(const FittedModel& m) {
  nlohmann::json coefs = nlohmann::json::array();
  nlohmann::json ses = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.coefficients.size(); ++i) {
    coefs.push_back(m.coefficients[i]);
    ses.push_back(m.standard_errors[i]);
  }
  nlohmann::json pvals = nlohmann::json::array();
  bool have_se = m.standard_errors.size() > 0 &&
                 m.standard_errors.minCoeff() > 0;
  if (have_se)
    for (const auto& w : wald_stats(m)) pvals.push_back(w.p_value);
  return {{"recipe", m.feature_recipe},
          {"features", m.feature_names},
          {"coefficients", coefs},
          {"standard_errors", ses},
          {"p_values", pvals},
          {"converged", m.converged},
          {"iterations", m.iterations},
          {"log_likelihood", m.log_likelihood},
          {"separation_suspected", m.separation_suspected},
          {"hessian_ridged", m.hessian_ridged}};
}

inline std::string summary_csv(const std::vector<VariantSummary>& summaries) {
  std::string s =
      "variant,metric,mean,sd,excluded_trials,degenerate_trials\n";
  for (const auto& vs : summaries) {
    auto row = [&](const char* name, const MetricSummary& m) {
      s += variant_name(vs.variant);
      s += ',';
      s += name;
      s += ',' + std::to_string(m.mean) + ',' + std::to_string(m.sd) + ',' +
           std::to_string(m.excluded) + ',' +
           std::to_string(vs.degenerate_trials) + '\n';
    };
    row("auc", vs.auc);
    row("sensitivity", vs.sensitivity);
    row("specificity", vs.specificity);
    row("npv", vs.npv);
    row("ppv", vs.ppv);
    row("n_terms", vs.n_terms);
    row("fit_seconds", vs.fit_seconds);
  }
  return s;
}

}  // namespace lips
