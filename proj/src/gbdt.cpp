// Copyright 2026 The harbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harbench/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "harbench/parallel.hpp"
#include "harbench/simd/kernels.hpp"
#include "json.hpp"

namespace harbench::gbdt {
namespace {

using simd::GradPair;

// Below this many (rows x features) a node is scanned on the calling thread.
constexpr std::size_t kParallelWork = 1 << 15;

struct Candidate {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool default_left = true;
};

// Takes `c` when strictly better; equal gains keep the earlier candidate.
void consider(Candidate& best, double gain, int feature, double threshold, bool default_left) {
  if (gain > 0.0 && (!best.valid || gain > best.gain)) best = {true, gain, feature, threshold, default_left};
}

struct Binned {
  std::size_t n = 0;
  std::uint16_t missing_bin = 0;
  std::vector<std::vector<double>> cuts;    // per feature; bin(x) = #cuts <= x
  std::vector<std::vector<double>> values;  // per feature: sorted distinct training values
  std::vector<std::uint16_t> bins;          // feature-major, n per feature
};

Binned bin_features(const MatrixD& x, int n_bins) {
  Binned b;
  b.n = x.rows();
  b.missing_bin = static_cast<std::uint16_t>(n_bins);
  const std::size_t d = x.cols();
  b.cuts.resize(d);
  b.values.resize(d);
  b.bins.resize(d * b.n);
  parallel_for(d, [&](std::size_t f) {
    std::vector<double> sorted;
    sorted.reserve(b.n);
    for (std::size_t i = 0; i < b.n; ++i) {
      if (!std::isnan(x(i, f))) sorted.push_back(x(i, f));
    }
    std::sort(sorted.begin(), sorted.end());
    auto& uniq = b.values[f];
    uniq = sorted;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    auto& cuts = b.cuts[f];
    if (uniq.size() <= static_cast<std::size_t>(n_bins)) {
      if (!uniq.empty()) cuts.assign(uniq.begin() + 1, uniq.end());
    } else {
      // Quantile cuts: the value at each 1/n_bins rank boundary.
      for (int k = 1; k < n_bins; ++k) {
        const double c = sorted[static_cast<std::size_t>(k) * sorted.size() / static_cast<std::size_t>(n_bins)];
        if (c > sorted.front() && (cuts.empty() || c > cuts.back())) cuts.push_back(c);
      }
    }
    std::uint16_t* col = b.bins.data() + f * b.n;
    for (std::size_t i = 0; i < b.n; ++i) {
      const double v = x(i, f);
      col[i] = std::isnan(v) ? b.missing_bin
                             : static_cast<std::uint16_t>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
    }
  });
  return b;
}

class TreeBuilder {
 public:
  TreeBuilder(const MatrixD& x, const Binned& binned, const TrainConfig& cfg, const std::vector<GradPair>& grad)
      : x_(x), binned_(binned), cfg_(cfg), grad_(grad), kt_(simd::active_kernels()) {}

  // Builds one tree over `rows`; writes each row's leaf value into `delta`
  // and adds split gains to `importance`.
  Tree build(std::vector<std::uint32_t> rows, std::vector<double>& delta, std::vector<double>& importance) {
    tree_ = Tree{};
    delta_ = &delta;
    importance_ = &importance;
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::uint32_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double g = 0.0, h = 0.0;
    for (auto r : rows) {
      g += grad_[r].g;
      h += grad_[r].h;
    }
    Candidate best;
    if (depth < cfg_.max_depth && rows.size() >= 2) best = find_split(rows, g, h);
    if (!best.valid) {
      const double w = leaf_weight(g, h, cfg_.lambda_l2, cfg_.alpha_l1, cfg_.eta);
      tree_.nodes[static_cast<std::size_t>(id)].weight = w;
      for (auto r : rows) (*delta_)[r] = w;
      return id;
    }
    std::vector<std::uint32_t> left, right;
    for (auto r : rows) {
      const double v = x_(r, static_cast<std::size_t>(best.feature));
      const bool go_left = std::isnan(v) ? best.default_left : v < best.threshold;
      (go_left ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    (*importance_)[static_cast<std::size_t>(best.feature)] += best.gain;
    {
      auto& node = tree_.nodes[static_cast<std::size_t>(id)];
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.default_left = best.default_left;
      node.gain = best.gain;
      node.weight = leaf_weight(g, h, cfg_.lambda_l2, cfg_.alpha_l1, cfg_.eta);
    }
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[static_cast<std::size_t>(id)].left = l;
    tree_.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  Candidate find_split(const std::vector<std::uint32_t>& rows, double g, double h) {
    const std::size_t d = x_.cols();
    std::vector<Candidate> per_feature(d);
    auto scan = [&](std::size_t f) {
      per_feature[f] = cfg_.split_method == SplitMethod::histogram ? scan_histogram(rows, f, g, h)
                                                                   : scan_exact(rows, f, g, h);
    };
    if (rows.size() * d >= kParallelWork) {
      parallel_for(d, scan);
    } else {
      for (std::size_t f = 0; f < d; ++f) scan(f);
    }
    Candidate best;
    for (const auto& c : per_feature) {
      if (c.valid) consider(best, c.gain, c.feature, c.threshold, c.default_left);
    }
    return best;
  }

  // Evaluates the boundary after a left prefix (gl, hl), sending the missing
  // group (gm, hm) left first, then right.
  // Counts guard against one-sided splits whose gain is rounding noise.
  void evaluate(Candidate& best, int f, double threshold, double gl, double hl, std::size_t nl, double gm, double hm,
                std::size_t nm, double g, double h, std::size_t n) const {
    const double lambda = cfg_.lambda_l2, alpha = cfg_.alpha_l1, gamma = cfg_.gamma, mcw = cfg_.min_child_weight;
    {
      const double l_g = gl + gm, l_h = hl + hm;
      const double r_g = g - l_g, r_h = h - l_h;
      const std::size_t l_n = nl + nm;
      if (l_n > 0 && l_n < n && l_h >= mcw && r_h >= mcw) {
        consider(best, split_gain(l_g, l_h, r_g, r_h, lambda, alpha, gamma), f, threshold, true);
      }
    }
    {
      const double r_g = g - gl, r_h = h - hl;
      if (nl > 0 && nl < n && hl >= mcw && r_h >= mcw) {
        consider(best, split_gain(gl, hl, r_g, r_h, lambda, alpha, gamma), f, threshold, false);
      }
    }
  }

  Candidate scan_histogram(const std::vector<std::uint32_t>& rows, std::size_t f, double g, double h) const {
    const auto& cuts = binned_.cuts[f];
    if (cuts.empty()) return {};
    std::vector<GradPair> hist(static_cast<std::size_t>(binned_.missing_bin) + 1);
    std::vector<std::uint32_t> count(hist.size(), 0);
    const std::uint16_t* col = binned_.bins.data() + f * binned_.n;
    kt_.histogram(col, rows.data(), rows.size(), grad_.data(), hist.data());
    for (auto r : rows) ++count[col[r]];
    const GradPair miss = hist[binned_.missing_bin];
    const std::size_t nm = count[binned_.missing_bin];
    Candidate best;
    double gl = 0.0, hl = 0.0;
    std::size_t nl = 0;
    for (std::size_t s = 1; s <= cuts.size(); ++s) {
      gl += hist[s - 1].g;
      hl += hist[s - 1].h;
      nl += count[s - 1];
      evaluate(best, static_cast<int>(f), cuts[s - 1], gl, hl, nl, miss.g, miss.h, nm, g, h, rows.size());
    }
    return best;
  }

  // Exact greedy over the node's sorted values. Thresholds sit at the next
  // distinct training value, and per-value sums are formed in row order, so
  // with one bin per value this reproduces scan_histogram exactly.
  Candidate scan_exact(const std::vector<std::uint32_t>& rows, std::size_t f, double g, double h) const {
    const auto& grid = binned_.values[f];
    std::vector<std::pair<double, std::uint32_t>> present;
    double gm = 0.0, hm = 0.0;
    for (auto r : rows) {
      const double v = x_(r, f);
      if (std::isnan(v)) {
        gm += grad_[r].g;
        hm += grad_[r].h;
      } else {
        present.emplace_back(v, r);
      }
    }
    std::stable_sort(present.begin(), present.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t nm = rows.size() - present.size();
    Candidate best;
    double gl = 0.0, hl = 0.0;
    std::size_t nl = 0;
    // The boundary below every present value: only the missing rows can go left.
    if (!present.empty() && grid.size() > 1 && present.front().first > grid.front()) {
      evaluate(best, static_cast<int>(f), grid[1], 0.0, 0.0, 0, gm, hm, nm, g, h, rows.size());
    }
    std::size_t i = 0;
    while (i < present.size()) {
      const double v = present[i].first;
      double gv = 0.0, hv = 0.0;
      // Same row-order accumulation as the histogram bins.
      std::vector<std::uint32_t> group;
      for (; i < present.size() && present[i].first == v; ++i) group.push_back(present[i].second);
      std::sort(group.begin(), group.end());
      for (auto r : group) {
        gv += grad_[r].g;
        hv += grad_[r].h;
      }
      gl += gv;
      hl += hv;
      nl += group.size();
      const auto next = std::upper_bound(grid.begin(), grid.end(), v);
      if (next == grid.end()) break;
      evaluate(best, static_cast<int>(f), *next, gl, hl, nl, gm, hm, nm, g, h, rows.size());
    }
    return best;
  }

  const MatrixD& x_;
  const Binned& binned_;
  const TrainConfig& cfg_;
  const std::vector<GradPair>& grad_;
  const simd::KernelTable& kt_;
  Tree tree_;
  std::vector<double>* delta_ = nullptr;
  std::vector<double>* importance_ = nullptr;
};

void check_width(const GbdtEnsemble& model, const MatrixD& features) {
  if (features.cols() != model.n_features) {
    throw Error(Errc::DimensionMismatch, "feature width " + std::to_string(features.cols()) + ", model expects " +
                                             std::to_string(model.n_features));
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
  if (rounds < 0) bad("rounds must be >= 0");
  if (max_depth < 0) bad("max_depth must be >= 0");
  if (!(eta > 0.0) || !std::isfinite(eta)) bad("eta must be positive");
  if (!(lambda_l2 >= 0.0) || !std::isfinite(lambda_l2)) bad("lambda_l2 must be >= 0");
  if (!(alpha_l1 >= 0.0) || !std::isfinite(alpha_l1)) bad("alpha_l1 must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) bad("gamma must be >= 0");
  if (!(min_child_weight >= 0.0) || !std::isfinite(min_child_weight)) bad("min_child_weight must be >= 0");
  if (n_bins < 2 || n_bins > 65535) bad("n_bins must be in [2, 65535]");
}

double Tree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    const double v = x[static_cast<std::size_t>(n.feature)];
    const bool left = std::isnan(v) ? n.default_left : v < n.threshold;
    i = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return nodes[i].weight;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

double leaf_weight(double g, double h, double lambda, double alpha, double eta) {
  const double denom = h + lambda;
  if (!(denom > 0.0)) return 0.0;
  return -soft_threshold(g, alpha) / denom * eta;
}

double split_gain(double gl, double hl, double gr, double hr, double lambda, double alpha, double gamma) {
  auto score = [&](double g, double h) {
    const double t = soft_threshold(g, alpha);
    const double denom = h + lambda;
    return denom > 0.0 ? t * t / denom : 0.0;
  };
  return 0.5 * (score(gl, hl) + score(gr, hr) - score(gl + gr, hl + hr)) - gamma;
}

void softmax(std::span<const double> margins, std::span<double> out) {
  const double m = *std::max_element(margins.begin(), margins.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < margins.size(); ++k) {
    out[k] = std::exp(margins[k] - m);
    sum += out[k];
  }
  for (auto& v : out.first(margins.size())) v /= sum;
}

double softmax_loss(std::span<const double> margins, std::size_t label) {
  const double m = *std::max_element(margins.begin(), margins.end());
  double sum = 0.0;
  for (double v : margins) sum += std::exp(v - m);
  return std::log(sum) + m - margins[label];
}

double log_loss(const MatrixD& proba, std::span<const int> labels, std::span<const int> classes) {
  double total = 0.0;
  for (std::size_t i = 0; i < proba.rows(); ++i) {
    const auto k = static_cast<std::size_t>(std::find(classes.begin(), classes.end(), labels[i]) - classes.begin());
    total -= std::log(std::max(proba(i, k), 1e-300));
  }
  return total / static_cast<double>(proba.rows());
}

GbdtEnsemble train(const MatrixD& features, std::span<const int> labels, const TrainConfig& config) {
  config.validate();
  const std::size_t n = features.rows(), d = features.cols();
  if (n < 2 || d == 0) throw Error(Errc::EmptyData, "training needs at least two rows and one feature");
  if (labels.size() != n) throw Error(Errc::DimensionMismatch, "labels and feature rows differ");
  for (std::size_t i = 0; i < n * d; ++i) {
    if (std::isinf(features.data()[i])) throw Error(Errc::NonFiniteLabelOrFeature, "infinite feature value");
  }

  GbdtEnsemble model;
  model.config = config;
  model.n_features = d;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw Error(Errc::SingleClass, "training labels hold a single class");
  const std::size_t k_count = model.classes.size();

  std::vector<std::size_t> y(n);
  std::vector<std::size_t> counts(k_count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), labels[i]) -
                                    model.classes.begin());
    ++counts[y[i]];
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    model.base_score.push_back(std::log(static_cast<double>(counts[k]) / static_cast<double>(n)));
  }
  model.importance.assign(d, 0.0);
  if (config.rounds == 0) return model;

  const Binned binned = bin_features(features, config.n_bins);
  MatrixD margin(n, k_count);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < k_count; ++k) margin(i, k) = model.base_score[k];
  }
  std::vector<std::uint32_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0u);
  MatrixD proba(n, k_count);
  std::vector<GradPair> grad(n);
  std::vector<double> delta(n);

  for (int round = 0; round < config.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) softmax(margin.row(i), proba.row(i));
    for (std::size_t k = 0; k < k_count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = proba(i, k);
        grad[i] = {p - (y[i] == k ? 1.0 : 0.0), p * (1.0 - p)};
      }
      TreeBuilder builder(features, binned, config, grad);
      model.trees.push_back(builder.build(all_rows, delta, model.importance));
      for (std::size_t i = 0; i < n; ++i) margin(i, k) += delta[i];
    }
  }
  return model;
}

MatrixD predict_margin(const GbdtEnsemble& model, const MatrixD& features) {
  check_width(model, features);
  const std::size_t k_count = model.classes.size();
  MatrixD out(features.rows(), k_count);
  parallel_for(features.rows(), [&](std::size_t i) {
    const auto x = features.row(i);
    auto row = out.row(i);
    for (std::size_t k = 0; k < k_count; ++k) row[k] = model.base_score[k];
    for (std::size_t t = 0; t < model.trees.size(); ++t) row[t % k_count] += model.trees[t].predict(x);
  });
  return out;
}

MatrixD predict_proba(const GbdtEnsemble& model, const MatrixD& features) {
  MatrixD m = predict_margin(model, features);
  for (std::size_t i = 0; i < m.rows(); ++i) softmax(m.row(i), m.row(i));
  return m;
}

std::vector<int> predict_labels(const GbdtEnsemble& model, const MatrixD& proba) {
  std::vector<int> out(proba.rows());
  for (std::size_t i = 0; i < proba.rows(); ++i) {
    const auto row = proba.row(i);
    out[i] = model.classes[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())];
  }
  return out;
}

std::vector<double> feature_importance(const GbdtEnsemble& model) {
  if (model.importance.size() == model.n_features) return model.importance;
  return std::vector<double>(model.n_features, 0.0);
}

std::string to_json(const GbdtEnsemble& model) {
  using nlohmann::json;
  const auto& c = model.config;
  json trees = json::array();
  for (const auto& t : model.trees) {
    json nodes = json::array();
    for (const auto& nd : t.nodes) {
      nodes.push_back({nd.feature, nd.threshold, nd.default_left, nd.left, nd.right, nd.weight, nd.gain});
    }
    trees.push_back(std::move(nodes));
  }
  json doc = {
      {"format", "harbench.gbdt"},
      {"version", std::string(kVersion)},
      {"config",
       {{"rounds", c.rounds},
        {"max_depth", c.max_depth},
        {"eta", c.eta},
        {"lambda_l2", c.lambda_l2},
        {"alpha_l1", c.alpha_l1},
        {"gamma", c.gamma},
        {"min_child_weight", c.min_child_weight},
        {"n_bins", c.n_bins},
        {"seed", c.seed},
        {"split_method", c.split_method == SplitMethod::exact ? "exact" : "histogram"}}},
      {"classes", model.classes},
      {"base_score", model.base_score},
      {"n_features", model.n_features},
      {"importance", model.importance},
      {"trees", trees},
  };
  return doc.dump();
}

GbdtEnsemble model_from_json(std::string_view text) {
  using nlohmann::json;
  GbdtEnsemble m;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "harbench.gbdt") throw Error(Errc::InvalidArgument, "not a gbdt model");
    const auto& c = doc.at("config");
    m.config.rounds = c.at("rounds");
    m.config.max_depth = c.at("max_depth");
    m.config.eta = c.at("eta");
    m.config.lambda_l2 = c.at("lambda_l2");
    m.config.alpha_l1 = c.at("alpha_l1");
    m.config.gamma = c.at("gamma");
    m.config.min_child_weight = c.at("min_child_weight");
    m.config.n_bins = c.at("n_bins");
    m.config.seed = c.at("seed");
    m.config.split_method = c.at("split_method") == "exact" ? SplitMethod::exact : SplitMethod::histogram;
    m.classes = doc.at("classes").get<std::vector<int>>();
    m.base_score = doc.at("base_score").get<std::vector<double>>();
    m.n_features = doc.at("n_features");
    m.importance = doc.at("importance").get<std::vector<double>>();
    for (const auto& t : doc.at("trees")) {
      Tree tree;
      for (const auto& nd : t) {
        TreeNode node;
        node.feature = nd.at(0);
        node.threshold = nd.at(1);
        node.default_left = nd.at(2);
        node.left = nd.at(3);
        node.right = nd.at(4);
        node.weight = nd.at(5);
        node.gain = nd.at(6);
        tree.nodes.push_back(node);
      }
      m.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed model document: ") + e.what());
  }
  if (m.classes.empty() || m.trees.size() % m.classes.size() != 0 || m.base_score.size() != m.classes.size()) {
    throw Error(Errc::InvalidArgument, "inconsistent model document");
  }
  return m;
}

}  // namespace harbench::gbdt
