// Copyright 2026 The dialectid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialectid/svm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "binary_io.h"
#include "dialectid/error.h"
#include "dialectid/log.h"
#include "number_format.h"
#include "parallel.h"

namespace dialectid {

void TrainConfig::validate() const {
  if (c_grid.empty()) throw ConfigError("C grid is empty");
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > 0.0) || !std::isfinite(c_grid[i])) {
      throw ConfigError("C values must be positive and finite");
    }
    if (i > 0 && !(c_grid[i] > c_grid[i - 1])) {
      throw ConfigError("C grid must be strictly ascending");
    }
  }
  if (k_folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (threads < 1) throw ConfigError("threads must be positive");
  index.validate();
}

double BinarySvm::decision_value(const FeatureVector& x) const {
  return dot(x, weights) + bias;
}

namespace {

void check_problem(std::span<const FeatureVector> x, std::span<const int> y,
                   std::size_t dimension, double c) {
  if (x.size() != y.size()) {
    throw DataError("feature vectors and labels differ in length");
  }
  if (x.empty()) throw DataError("no training examples");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be positive and finite");
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1) {
      has_pos = true;
    } else if (y[i] == -1) {
      has_neg = true;
    } else {
      throw DataError("binary labels must be +1 or -1");
    }
    std::uint32_t previous = 0;
    for (std::size_t k = 0; k < x[i].entries.size(); ++k) {
      const FeatureEntry& e = x[i].entries[k];
      if (!std::isfinite(e.value)) {
        throw DataError("non-finite feature value in example " + std::to_string(i));
      }
      if (e.column >= dimension) {
        throw DataError("feature column out of range in example " + std::to_string(i));
      }
      if (k > 0 && e.column <= previous) {
        throw DataError("feature columns not increasing in example " + std::to_string(i));
      }
      previous = e.column;
    }
  }
  if (!has_pos || !has_neg) {
    throw DataError("binary training needs examples of both signs");
  }
}

void axpy(double a, const FeatureVector& x, std::vector<double>& w) {
  for (const auto& e : x.entries) w[e.column] += a * e.value;
}

}  // namespace

BinarySvm train_binary_svm(std::span<const FeatureVector> x,
                           std::span<const int> y, std::size_t dimension,
                           double c, const TrainConfig& config) {
  check_problem(x, y, dimension, c);
  const std::size_t n = x.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> alpha(n, 0.0);
  std::vector<double> sq_norm(n);
  std::vector<double> v(n);  // v_i = y_i - w.x_i
  for (std::size_t i = 0; i < n; ++i) sq_norm[i] = x[i].squared_norm();

  BinarySvm out;
  out.weights.assign(dimension, 0.0);
  std::vector<double>& w = out.weights;
  double alpha_sum = 0.0;

  // I_up: y_i alpha_i can grow. I_low: y_i alpha_i can shrink.
  const auto in_up = [&](std::size_t i) {
    return y[i] > 0 ? alpha[i] < c : alpha[i] > 0.0;
  };
  const auto in_low = [&](std::size_t i) {
    return y[i] > 0 ? alpha[i] > 0.0 : alpha[i] < c;
  };
  const auto objective = [&] {
    double ww = 0.0;
    for (double wj : w) ww += wj * wj;
    return 0.5 * ww - alpha_sum;
  };

  // Exact line search along alpha_i += y_i t, alpha_j -= y_j t, which keeps
  // sum(alpha y) fixed and moves w by t (x_i - x_j).
  const auto step = [&](std::size_t i, std::size_t j) {
    if (i == j || !in_up(i) || !in_low(j)) return;
    const double vi = y[i] - dot(x[i], w);
    const double vj = y[j] - dot(x[j], w);
    const double diff = vi - vj;
    if (!(diff > 0.0)) return;
    double curvature = sq_norm[i] + sq_norm[j] - 2.0 * dot(x[i], x[j]);
    curvature = std::max(curvature, 1e-12);
    const double room_i = y[i] > 0 ? c - alpha[i] : alpha[i];
    const double room_j = y[j] > 0 ? alpha[j] : c - alpha[j];
    double t = diff / curvature;
    bool clip_i = false;
    bool clip_j = false;
    if (t >= room_i) {
      t = room_i;
      clip_i = true;
    }
    if (t >= room_j) {
      t = room_j;
      clip_j = true;
      clip_i = clip_i && room_i == room_j;
    }
    if (!(t > 0.0)) return;
    alpha[i] = clip_i ? (y[i] > 0 ? c : 0.0) : alpha[i] + y[i] * t;
    alpha[j] = clip_j ? (y[j] > 0 ? 0.0 : c) : alpha[j] - y[j] * t;
    alpha_sum += (y[i] - y[j]) * t;
    axpy(t, x[i], w);
    axpy(-t, x[j], w);
  };

  constexpr int kRoundsPerEpoch = 8;
  const double slack = 0.5 * config.tolerance;
  std::vector<std::size_t> active;
  std::vector<std::size_t> up;
  std::vector<std::size_t> low;
  double m = -kInf;
  double big_m = kInf;
  int epoch = 0;
  for (;; ++epoch) {
    m = -kInf;
    big_m = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = y[i] - dot(x[i], w);
      if (in_up(i)) m = std::max(m, v[i]);
      if (in_low(i)) big_m = std::min(big_m, v[i]);
    }
    out.objective_trace.push_back(objective());
    out.violation = (m == -kInf || big_m == kInf) ? 0.0 : m - big_m;
    if (out.violation < config.tolerance) {
      out.converged = true;
      break;
    }
    if (epoch == config.max_epochs) break;

    // The first round pairs over all examples; later rounds revisit only
    // the examples that violated at the start of the epoch, with their
    // gradients refreshed.
    active.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if ((in_up(i) && v[i] > big_m + slack) || (in_low(i) && v[i] < m - slack)) {
        active.push_back(i);
      }
    }
    for (int round = 0; round < kRoundsPerEpoch; ++round) {
      double round_m = -kInf;
      double round_big_m = kInf;
      if (round > 0) {
        for (std::size_t i : active) {
          v[i] = y[i] - dot(x[i], w);
          if (in_up(i)) round_m = std::max(round_m, v[i]);
          if (in_low(i)) round_big_m = std::min(round_big_m, v[i]);
        }
        if (round_m - round_big_m < config.tolerance) break;
      } else {
        round_m = m;
        round_big_m = big_m;
      }
      up.clear();
      low.clear();
      for (std::size_t i : active) {
        if (in_up(i) && v[i] > round_big_m + slack) up.push_back(i);
        if (in_low(i) && v[i] < round_m - slack) low.push_back(i);
      }
      std::stable_sort(up.begin(), up.end(),
                       [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
      std::stable_sort(low.begin(), low.end(),
                       [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
      const std::size_t pairs = std::min(up.size(), low.size());
      for (std::size_t k = 0; k < pairs; ++k) {
        if (v[up[k]] - v[low[k]] <= slack) break;
        step(up[k], low[k]);
      }
    }
  }
  out.epochs = epoch;

  // Bias from the free support vectors, else the middle of the feasible range.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0 && alpha[i] < c) {
      free_sum += v[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    out.bias = free_sum / static_cast<double>(free_count);
  } else if (m == -kInf) {
    out.bias = big_m;
  } else if (big_m == kInf) {
    out.bias = m;
  } else {
    out.bias = 0.5 * (m + big_m);
  }
  return out;
}

double primal_objective(const BinarySvm& svm, std::span<const FeatureVector> x,
                        std::span<const int> y, double c) {
  double ww = 0.0;
  for (double wj : svm.weights) ww += wj * wj;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    loss += std::max(0.0, 1.0 - y[i] * svm.decision_value(x[i]));
  }
  return 0.5 * ww + c * loss;
}

std::size_t argmax_class(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

LinearModel::LinearModel(std::vector<std::string> classes,
                         std::vector<std::vector<double>> weights,
                         std::vector<double> biases, FeatureSpec spec,
                         FeatureIndex index, double chosen_c)
    : classes_(std::move(classes)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      spec_(std::move(spec)),
      index_(std::move(index)),
      chosen_c_(chosen_c) {
  spec_.validate();
  if (classes_.empty()) throw ConfigError("model has no classes");
  if (weights_.size() != classes_.size() || biases_.size() != classes_.size()) {
    throw ConfigError("model needs one weight vector and bias per class");
  }
  for (const auto& w : weights_) {
    if (w.size() != index_.size()) {
      throw ConfigError("weight vector length differs from feature index size");
    }
  }
  if (!(chosen_c_ > 0.0)) throw ConfigError("chosen C must be positive");
}

FeatureVector LinearModel::featurize(std::string_view raw) const {
  return vectorize(normalize_text(raw), index_, spec_);
}

std::vector<double> LinearModel::decision_values(const FeatureVector& v) const {
  std::vector<double> scores(classes_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    scores[k] = dot(v, weights_[k]) + biases_[k];
  }
  return scores;
}

std::size_t LinearModel::predict_index(const FeatureVector& v) const {
  return argmax_class(decision_values(v));
}

const std::string& LinearModel::predict(std::string_view raw) const {
  return classes_[predict_index(featurize(raw))];
}

namespace {

struct OvrWeights {
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;
  std::vector<double> unconverged_violation;  // 0 when converged
};

OvrWeights train_ovr_vectors(std::span<const FeatureVector> x,
                             std::span<const std::size_t> class_of,
                             std::size_t num_classes, std::size_t dimension,
                             double c, const TrainConfig& config, int threads) {
  OvrWeights out;
  out.weights.resize(num_classes);
  out.biases.resize(num_classes);
  out.unconverged_violation.assign(num_classes, 0.0);
  internal::parallel_for(num_classes, threads, [&](std::size_t k) {
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = class_of[i] == k ? 1 : -1;
    BinarySvm svm = train_binary_svm(x, y, dimension, c, config);
    out.weights[k] = std::move(svm.weights);
    out.biases[k] = svm.bias;
    if (!svm.converged) out.unconverged_violation[k] = svm.violation;
  });
  return out;
}

std::vector<std::size_t> class_ids(const Corpus& corpus) {
  std::vector<std::size_t> ids(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ids[i] = corpus.label_id(corpus[i].label);
  }
  return ids;
}

void check_ovr_corpus(const Corpus& train) {
  if (train.labels().size() < 2) {
    throw DataError("one-vs-rest training needs at least two labels");
  }
  std::vector<std::size_t> counts(train.labels().size(), 0);
  for (std::size_t id : class_ids(train)) ++counts[id];
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw DataError("label '" + train.labels()[k] + "' has no training sentences");
    }
  }
}

}  // namespace

LinearModel train_ovr(const Corpus& train, const FeatureSpec& spec, double c,
                      const TrainConfig& config) {
  config.validate();
  spec.validate();
  check_ovr_corpus(train);
  FeatureIndex index = build_feature_index(train, spec, config.index);
  const std::vector<FeatureVector> x =
      vectorize_corpus(train, index, spec, config.threads);
  const std::vector<std::size_t> ids = class_ids(train);
  OvrWeights trained = train_ovr_vectors(x, ids, train.labels().size(),
                                         index.size(), c, config, config.threads);
  for (std::size_t k = 0; k < train.labels().size(); ++k) {
    if (trained.unconverged_violation[k] > 0.0) {
      warn("class '" + train.labels()[k] + "' stopped at the epoch limit (" +
           std::to_string(config.max_epochs) + ") with KKT violation " +
           internal::round_trip(trained.unconverged_violation[k]) + " at C=" +
           internal::round_trip(c));
    }
  }
  return LinearModel(train.labels(), std::move(trained.weights),
                     std::move(trained.biases), spec, std::move(index), c);
}

GridSearchResult grid_search(const Corpus& train, const FeatureSpec& spec,
                             const TrainConfig& config) {
  config.validate();
  spec.validate();
  check_ovr_corpus(train);
  const FoldAssignment folds = make_cv_folds(train, config.k_folds, config.seed);
  const std::size_t num_c = config.c_grid.size();
  const std::size_t num_classes = train.labels().size();
  const std::vector<std::size_t> all_ids = class_ids(train);

  GridSearchResult result;
  result.points.resize(num_c);
  for (std::size_t ci = 0; ci < num_c; ++ci) {
    result.points[ci].c = config.c_grid[ci];
    result.points[ci].fold_accuracy.assign(static_cast<std::size_t>(folds.k), 0.0);
  }

  for (int f = 0; f < folds.k; ++f) {
    const std::vector<std::size_t> fit_idx = folds.training(f);
    const std::vector<std::size_t> held_idx = folds.held_out(f);
    const Corpus fit = train.subset(fit_idx);
    const Corpus held = train.subset(held_idx);
    const FeatureIndex index = build_feature_index(fit, spec, config.index);
    const std::vector<FeatureVector> x_fit =
        vectorize_corpus(fit, index, spec, config.threads);
    const std::vector<FeatureVector> x_held =
        vectorize_corpus(held, index, spec, config.threads);
    const std::vector<std::size_t> fit_ids = class_ids(fit);

    internal::parallel_for(num_c, config.threads, [&](std::size_t ci) {
      const OvrWeights trained =
          train_ovr_vectors(x_fit, fit_ids, num_classes, index.size(),
                            config.c_grid[ci], config, 1);
      std::size_t correct = 0;
      std::vector<double> scores(num_classes);
      for (std::size_t i = 0; i < x_held.size(); ++i) {
        for (std::size_t k = 0; k < num_classes; ++k) {
          scores[k] = dot(x_held[i], trained.weights[k]) + trained.biases[k];
        }
        if (argmax_class(scores) == all_ids[held_idx[i]]) ++correct;
      }
      result.points[ci].fold_accuracy[static_cast<std::size_t>(f)] =
          static_cast<double>(correct) / static_cast<double>(x_held.size());
    });
  }

  double best = -1.0;
  for (auto& point : result.points) {
    point.mean_accuracy =
        std::accumulate(point.fold_accuracy.begin(), point.fold_accuracy.end(), 0.0) /
        static_cast<double>(folds.k);
    if (point.mean_accuracy > best) {
      best = point.mean_accuracy;
      result.best_c = point.c;
    }
  }
  return result;
}

void write_grid_report(std::ostream& out, const GridSearchResult& result) {
  out << "c\tmean_cv_accuracy";
  const std::size_t k =
      result.points.empty() ? 0 : result.points.front().fold_accuracy.size();
  for (std::size_t f = 0; f < k; ++f) out << "\tfold_" << (f + 1);
  out << '\n';
  for (const auto& p : result.points) {
    out << internal::round_trip(p.c) << '\t' << internal::round_trip(p.mean_accuracy);
    for (double a : p.fold_accuracy) out << '\t' << internal::round_trip(a);
    out << '\n';
  }
  out << "# best_c=" << internal::round_trip(result.best_c) << '\n';
}

namespace {
constexpr std::string_view kModelMagic = "DIALMODL";
constexpr std::string_view kModelTrailer = "END!";
}  // namespace

void write_model(std::ostream& out, const LinearModel& model) {
  internal::BinaryWriter w(out);
  w.bytes(kModelMagic);
  w.u32(kModelFormatVersion);
  const FeatureSpec& spec = model.feature_spec();
  w.u8(static_cast<std::uint8_t>(spec.char_orders.size()));
  for (int n : spec.char_orders) w.u8(static_cast<std::uint8_t>(n));
  w.u8(static_cast<std::uint8_t>(spec.word_orders.size()));
  for (int n : spec.word_orders) w.u8(static_cast<std::uint8_t>(n));
  write_feature_index(out, model.feature_index());
  w.u32(static_cast<std::uint32_t>(model.classes().size()));
  for (std::size_t k = 0; k < model.classes().size(); ++k) {
    w.str(model.classes()[k]);
    const auto& weights = model.weights()[k];
    w.u64(weights.size());
    for (double x : weights) w.f64(x);
    w.f64(model.biases()[k]);
  }
  w.f64(model.chosen_c());
  w.bytes(kModelTrailer);
  w.check("model");
}

LinearModel read_model(std::istream& in) {
  internal::BinaryReader r(in, "model file");
  if (r.bytes(kModelMagic.size()) != kModelMagic) {
    r.fail("not a dialectid model (bad magic bytes)");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    r.fail("unsupported model format version " + std::to_string(version) +
           " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }
  FeatureSpec spec;
  for (std::set<int>* orders : {&spec.char_orders, &spec.word_orders}) {
    const std::uint8_t count = r.u8();
    for (std::uint8_t i = 0; i < count; ++i) orders->insert(r.u8());
  }
  FeatureIndex index = read_feature_index(in);
  const std::uint32_t num_classes = r.u32();
  if (num_classes == 0 || num_classes > 1u << 16) r.fail("class count out of range");
  std::vector<std::string> classes;
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;
  for (std::uint32_t k = 0; k < num_classes; ++k) {
    classes.push_back(r.str());
    const std::uint64_t dim = r.u64();
    if (dim != index.size()) r.fail("weight vector length differs from index size");
    std::vector<double> w(static_cast<std::size_t>(dim));
    for (double& x : w) x = r.f64();
    weights.push_back(std::move(w));
    biases.push_back(r.f64());
  }
  const double chosen_c = r.f64();
  if (r.bytes(kModelTrailer.size()) != kModelTrailer) r.fail("missing trailer");
  if (in.peek() != std::char_traits<char>::eof()) r.fail("trailing bytes after model");
  try {
    return LinearModel(std::move(classes), std::move(weights), std::move(biases),
                       std::move(spec), std::move(index), chosen_c);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_model(out, model);
  out.close();
  if (!out) throw Error("failed to write " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace dialectid
