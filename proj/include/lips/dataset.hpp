#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lips/pattern.hpp"

namespace lips {

struct Variable {
  std::string name;
  std::vector<std::string> levels;  // first-appearance order
};

// n observations of p categorical variables plus a binary outcome.
// Immutable after construction; outcome 1 marks the minority class.
struct CategoricalDataset {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> rows;  // n x p level indices
  std::vector<int> outcome;            // 0/1

  std::size_t n() const { return rows.size(); }
  std::size_t p() const { return variables.size(); }

  void validate() const {
    if (rows.size() != outcome.size())
      throw std::invalid_argument("row/outcome length mismatch");
    std::size_t ones = 0, zeros = 0;
    for (int y : outcome) {
      if (y != 0 && y != 1) throw std::invalid_argument("outcome not binary");
      (y ? ones : zeros)++;
    }
    if (ones == 0 || zeros == 0)
      throw std::invalid_argument("outcome has an empty class");
    for (const auto& v : variables) {
      auto ls = v.levels;
      std::sort(ls.begin(), ls.end());
      if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
        throw std::invalid_argument("duplicate level in variable " + v.name);
    }
    for (const auto& row : rows) {
      if (row.size() != variables.size())
        throw std::invalid_argument("row width mismatch");
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] < 0 ||
            row[j] >= static_cast<int>(variables[j].levels.size()))
          throw std::invalid_argument("invalid level index");
      }
    }
  }
};

enum class MissingPolicy { drop_row, own_level };

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace and stray CR
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace detail

// Loads a comma-delimited table with a header row. The label column must
// be binary; the minority class is coded 1 (overridable). Missing cells
// are marked "?" in UCI files.
inline CategoricalDataset load_csv(
    const std::string& path, const std::string& label_column,
    MissingPolicy missing = MissingPolicy::own_level,
    std::optional<std::string> positive_label = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  auto header = detail::split_csv_line(line);

  int label_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == label_column) label_idx = static_cast<int>(j);
  if (label_idx < 0)
    throw std::runtime_error("label column not found: " + label_column);

  CategoricalDataset ds;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (static_cast<int>(j) != label_idx)
      ds.variables.push_back({header[j], {}});

  std::vector<std::string> raw_labels;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("ragged row in " + path);
    if (missing == MissingPolicy::drop_row) {
      bool has_missing = false;
      for (std::size_t j = 0; j < fields.size(); ++j)
        if (static_cast<int>(j) != label_idx && fields[j] == "?")
          has_missing = true;
      if (has_missing) continue;
    }
    std::vector<int> row;
    std::size_t vj = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (static_cast<int>(j) == label_idx) continue;
      auto& levels = ds.variables[vj].levels;
      auto it = std::find(levels.begin(), levels.end(), fields[j]);
      if (it == levels.end()) {
        levels.push_back(fields[j]);
        row.push_back(static_cast<int>(levels.size()) - 1);
      } else {
        row.push_back(static_cast<int>(it - levels.begin()));
      }
      ++vj;
    }
    ds.rows.push_back(std::move(row));
    raw_labels.push_back(fields[static_cast<std::size_t>(label_idx)]);
  }
  if (ds.rows.empty()) throw std::runtime_error("no rows after loading");

  std::vector<std::string> distinct;
  for (const auto& l : raw_labels)
    if (std::find(distinct.begin(), distinct.end(), l) == distinct.end())
      distinct.push_back(l);
  if (distinct.size() != 2)
    throw std::runtime_error("label column is not binary");

  std::string positive;
  if (positive_label) {
    if (*positive_label != distinct[0] && *positive_label != distinct[1])
      throw std::runtime_error("positive label not present in data");
    positive = *positive_label;
  } else {
    std::size_t c0 = static_cast<std::size_t>(
        std::count(raw_labels.begin(), raw_labels.end(), distinct[0]));
    positive = (c0 <= raw_labels.size() - c0) ? distinct[0] : distinct[1];
  }
  ds.outcome.reserve(raw_labels.size());
  for (const auto& l : raw_labels) ds.outcome.push_back(l == positive ? 1 : 0);

  ds.validate();
  return ds;
}

// One-hot dummy encoding; column order follows variable then level order.
inline DummyMatrix encode_dummies(const CategoricalDataset& ds) {
  DummyMatrix dm;
  dm.n = ds.n();
  for (std::size_t j = 0; j < ds.p(); ++j)
    for (std::size_t l = 0; l < ds.variables[j].levels.size(); ++l) {
      dm.columns.push_back({static_cast<int>(j), static_cast<int>(l)});
      dm.cols.emplace_back(dm.n);
    }
  std::vector<std::size_t> offsets(ds.p() + 1, 0);
  for (std::size_t j = 0; j < ds.p(); ++j)
    offsets[j + 1] = offsets[j] + ds.variables[j].levels.size();
  for (std::size_t i = 0; i < ds.n(); ++i)
    for (std::size_t j = 0; j < ds.p(); ++j)
      dm.cols[offsets[j] + static_cast<std::size_t>(ds.rows[i][j])].set(i);
  return dm;
}

inline DummyMatrix restrict_rows(const DummyMatrix& dm,
                                 const std::vector<std::size_t>& idx) {
  DummyMatrix out;
  out.n = idx.size();
  out.columns = dm.columns;
  out.cols.reserve(dm.cols.size());
  for (const auto& col : dm.cols) {
    BitVector c(out.n);
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (col.get(idx[i])) c.set(i);
    out.cols.push_back(std::move(c));
  }
  return out;
}

// Row indices of the minority (y = 1) and majority (y = 0) classes.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
class_partition(const CategoricalDataset& ds) {
  std::vector<std::size_t> minority, majority;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (ds.outcome[i] ? minority : majority).push_back(i);
  return {minority, majority};
}

inline CategoricalDataset take_rows(const CategoricalDataset& ds,
                                    const std::vector<std::size_t>& idx) {
  CategoricalDataset out;
  out.variables = ds.variables;
  for (auto i : idx) {
    out.rows.push_back(ds.rows[i]);
    out.outcome.push_back(ds.outcome[i]);
  }
  return out;
}

// Deterministic train/test split; stratified keeps per-class proportions
// within rounding.
inline std::pair<CategoricalDataset, CategoricalDataset> split(
    const CategoricalDataset& ds, double train_fraction, std::uint64_t seed,
    bool stratified = true) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must be in (0,1)");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  auto assign = [&](std::vector<std::size_t> pool) {
    if (stratified && pool.size() < 2)
      throw std::invalid_argument("class too small for stratified split");
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t k = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(pool.size())));
    k = std::min(std::max<std::size_t>(k, 1), pool.size() - 1);
    train_idx.insert(train_idx.end(), pool.begin(), pool.begin() + k);
    test_idx.insert(test_idx.end(), pool.begin() + k, pool.end());
  };
  if (stratified) {
    auto [mino, majo] = class_partition(ds);
    assign(std::move(mino));
    assign(std::move(majo));
  } else {
    std::vector<std::size_t> all(ds.n());
    std::iota(all.begin(), all.end(), 0);
    assign(std::move(all));
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

// Pattern text with the dataset's variable names and level labels.
inline std::string pattern_text(const Pattern& p,
                                const CategoricalDataset& ds) {
  if (p.empty()) return "⊤";
  std::string s;
  for (const auto& t : p.terms()) {
    if (!s.empty()) s += '&';
    s += ds.variables[static_cast<std::size_t>(t.var)].name;
    s += '=';
    s += ds.variables[static_cast<std::size_t>(t.var)]
             .levels[static_cast<std::size_t>(t.level)];
  }
  return s;
}

inline void write_csv(const CategoricalDataset& ds, const std::string& path,
                      const std::string& label_column = "y") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& v : ds.variables) out << v.name << ',';
  out << label_column << '\n';
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.p(); ++j)
      out << ds.variables[j].levels[static_cast<std::size_t>(ds.rows[i][j])]
          << ',';
    out << ds.outcome[i] << '\n';
  }
}

inline BitVector outcome_bits(const CategoricalDataset& ds) {
  BitVector y(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i)
    if (ds.outcome[i]) y.set(i);
  return y;
}

}  // namespace lips
