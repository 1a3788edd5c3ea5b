#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lips/ranking.hpp"

namespace lips {

enum class SelectionVariant { plain, scores, clusters };

struct Cluster {
  std::string label;               // R1..Ra / P1..Pb
  std::vector<std::size_t> members;  // indices into `selected`
};

struct SelectionResult {
  std::vector<RankedPattern> selected;  // in selection order
  std::vector<std::size_t> min_distance_at_selection;  // 0 for the first pick
  SelectionVariant variant = SelectionVariant::plain;
  std::vector<Cluster> clusters;  // clusters variant only
};

// Farthest-first greedy pick: start from the top-ranked pattern; at each
// step take the candidates maximizing the minimum dissimilarity to the
// already selected set and, among those, the highest ranked. With
// nearest_first=true the argmin reading is used instead.
inline SelectionResult select_dissimilar(
    const std::vector<RankedPattern>& ranked, std::size_t K,
    bool nearest_first = false) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  SelectionResult res;
  if (ranked.empty()) return res;
  std::vector<bool> taken(ranked.size(), false);
  res.selected.push_back(ranked[0]);
  res.min_distance_at_selection.push_back(0);
  taken[0] = true;
  while (res.selected.size() < K && res.selected.size() < ranked.size()) {
    std::size_t best_idx = 0;
    std::size_t best_m = 0;
    bool have = false;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (taken[i]) continue;
      std::size_t m = std::numeric_limits<std::size_t>::max();
      for (const auto& s : res.selected)
        m = std::min(m, dissimilarity(ranked[i].pattern, s.pattern));
      bool better = !have || (nearest_first ? m < best_m : m > best_m);
      if (better) {  // rank-order iteration makes ties resolve to the
                     // highest-ranked candidate
        best_idx = i;
        best_m = m;
        have = true;
      }
    }
    if (!have) break;
    taken[best_idx] = true;
    res.selected.push_back(ranked[best_idx]);
    res.min_distance_at_selection.push_back(best_m);
  }
  return res;
}

inline SelectionResult select_top(const std::vector<RankedPattern>& ranked,
                                  std::size_t K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  SelectionResult res;
  for (std::size_t i = 0; i < ranked.size() && i < K; ++i) {
    res.selected.push_back(ranked[i]);
    res.min_distance_at_selection.push_back(0);
  }
  return res;
}

// Risk patterns (OR > 1) sorted by descending OR, protection patterns
// (OR < 1) by ascending OR; OR = 1 falls in neither list.
inline std::pair<std::vector<RankedPattern>, std::vector<RankedPattern>>
split_risk_protection(const std::vector<RankedPattern>& ranked) {
  std::vector<RankedPattern> risk, prot;
  for (const auto& r : ranked) {
    if (r.odds_ratio > 1.0) risk.push_back(r);
    else if (r.odds_ratio < 1.0) prot.push_back(r);
  }
  std::stable_sort(risk.begin(), risk.end(), rank_before);
  std::stable_sort(prot.begin(), prot.end(), rank_before);
  return {risk, prot};
}

// Counts of selected risk / protection patterns present per row.
inline std::pair<std::vector<double>, std::vector<double>> build_scores(
    const std::vector<RankedPattern>& risk_sel,
    const std::vector<RankedPattern>& prot_sel, const DummyMatrix& dm) {
  auto accumulate = [&](const std::vector<RankedPattern>& sel) {
    std::vector<double> col(dm.n, 0.0);
    std::vector<Pattern> ps;
    for (const auto& r : sel) ps.push_back(r.pattern);
    auto mats = support_matrix(ps, dm);
    for (const auto& bits : mats)
      for (std::size_t i = 0; i < dm.n; ++i)
        if (bits.get(i)) col[i] += 1.0;
    return col;
  };
  return {accumulate(risk_sel), accumulate(prot_sel)};
}

// Undirected graph with an edge between every compatible pair.
struct CompatibilityGraph {
  std::vector<Pattern> nodes;
  std::vector<std::vector<bool>> adjacency;  // symmetric, no self-loops
};

inline CompatibilityGraph compatibility_graph(
    const std::vector<Pattern>& patterns) {
  for (std::size_t i = 0; i < patterns.size(); ++i)
    for (std::size_t j = i + 1; j < patterns.size(); ++j)
      if (patterns[i] == patterns[j])
        throw std::invalid_argument("duplicate pattern in graph input");
  CompatibilityGraph g;
  g.nodes = patterns;
  g.adjacency.assign(patterns.size(),
                     std::vector<bool>(patterns.size(), false));
  for (std::size_t i = 0; i < patterns.size(); ++i)
    for (std::size_t j = i + 1; j < patterns.size(); ++j)
      if (!incompatible(patterns[i], patterns[j]))
        g.adjacency[i][j] = g.adjacency[j][i] = true;
  return g;
}

namespace detail {

// Bron-Kerbosch with pivoting; enumerates all maximal cliques of the
// node subset marked alive.
inline void bron_kerbosch(const CompatibilityGraph& g,
                          std::vector<std::size_t>& R,
                          std::vector<std::size_t> P,
                          std::vector<std::size_t> X,
                          std::vector<std::vector<std::size_t>>& out) {
  if (P.empty() && X.empty()) {
    out.push_back(R);
    return;
  }
  std::size_t pivot = !P.empty() ? P.front() : X.front();
  std::size_t best_deg = 0;
  for (auto u : P) {
    std::size_t deg = 0;
    for (auto v : P)
      if (g.adjacency[u][v]) ++deg;
    if (deg >= best_deg) {
      best_deg = deg;
      pivot = u;
    }
  }
  std::vector<std::size_t> ext;
  for (auto v : P)
    if (!g.adjacency[pivot][v]) ext.push_back(v);
  for (auto v : ext) {
    std::vector<std::size_t> P2, X2;
    for (auto w : P)
      if (g.adjacency[v][w]) P2.push_back(w);
    for (auto w : X)
      if (g.adjacency[v][w]) X2.push_back(w);
    R.push_back(v);
    bron_kerbosch(g, R, std::move(P2), std::move(X2), out);
    R.pop_back();
    P.erase(std::find(P.begin(), P.end(), v));
    X.push_back(v);
  }
}

}  // namespace detail

// Greedy clique cover: repeatedly extract a maximum clique (largest
// maximal clique from Bron-Kerbosch; ties broken by summed |log OR|
// weight, then by node pattern order) until no nodes remain. Returns
// clusters as lists of node indices.
inline std::vector<std::vector<std::size_t>> greedy_clique_cover(
    const CompatibilityGraph& g, const std::vector<double>& weights = {}) {
  std::vector<std::vector<std::size_t>> cover;
  std::vector<std::size_t> alive(g.nodes.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  while (!alive.empty()) {
    CompatibilityGraph sub;
    sub.nodes.reserve(alive.size());
    for (auto i : alive) sub.nodes.push_back(g.nodes[i]);
    sub.adjacency.assign(alive.size(), std::vector<bool>(alive.size(), false));
    for (std::size_t a = 0; a < alive.size(); ++a)
      for (std::size_t b = 0; b < alive.size(); ++b)
        sub.adjacency[a][b] = g.adjacency[alive[a]][alive[b]];
    std::vector<std::vector<std::size_t>> cliques;
    std::vector<std::size_t> R, P(alive.size()), X;
    for (std::size_t i = 0; i < alive.size(); ++i) P[i] = i;
    detail::bron_kerbosch(sub, R, std::move(P), std::move(X), cliques);
    auto weight_of = [&](const std::vector<std::size_t>& c) {
      double w = 0;
      if (!weights.empty())
        for (auto i : c) w += weights[alive[i]];
      return w;
    };
    auto key_patterns = [&](const std::vector<std::size_t>& c) {
      std::vector<Pattern> ps;
      for (auto i : c) ps.push_back(sub.nodes[i]);
      std::sort(ps.begin(), ps.end());
      return ps;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < cliques.size(); ++i) {
      const auto& ci = cliques[i];
      const auto& cb = cliques[best];
      if (ci.size() != cb.size()) {
        if (ci.size() > cb.size()) best = i;
        continue;
      }
      double wi = weight_of(ci), wb = weight_of(cb);
      if (wi != wb) {
        if (wi > wb) best = i;
        continue;
      }
      if (key_patterns(ci) < key_patterns(cb)) best = i;
    }
    std::vector<std::size_t> cluster;
    for (auto i : cliques[best]) cluster.push_back(alive[i]);
    std::sort(cluster.begin(), cluster.end());
    cover.push_back(cluster);
    std::vector<std::size_t> next;
    for (auto i : alive)
      if (std::find(cluster.begin(), cluster.end(), i) == cluster.end())
        next.push_back(i);
    alive = std::move(next);
  }
  return cover;
}

// One integer column per cluster: the number of its member patterns
// present in each row.
inline std::vector<std::vector<double>> build_cluster_scores(
    const std::vector<std::vector<std::size_t>>& cover,
    const std::vector<Pattern>& patterns, const DummyMatrix& dm) {
  auto mats = support_matrix(patterns, dm);
  std::vector<std::vector<double>> out;
  out.reserve(cover.size());
  for (const auto& cluster : cover) {
    std::vector<double> col(dm.n, 0.0);
    for (auto k : cluster)
      for (std::size_t i = 0; i < dm.n; ++i)
        if (mats[k].get(i)) col[i] += 1.0;
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace lips
