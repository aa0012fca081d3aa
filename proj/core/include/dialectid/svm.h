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

#ifndef DIALECTID_SVM_H_
#define DIALECTID_SVM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialectid/corpus.h"
#include "dialectid/features.h"

namespace dialectid {

struct TrainConfig {
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  int k_folds = 5;
  std::uint64_t seed = 0;
  // Stop once the largest KKT violation of the dual falls below this.
  double tolerance = 1e-4;
  int max_epochs = 1000;
  // Worker threads for independent binary problems and CV cells.
  int threads = 1;
  // Applies to every index built during training, including per fold.
  IndexOptions index;

  void validate() const;
};

// A trained binary classifier f(x) = w.x + b.
struct BinarySvm {
  std::vector<double> weights;
  double bias = 0.0;
  int epochs = 0;
  bool converged = false;
  // Largest KKT violation (max over I_up minus min over I_low) at exit.
  double violation = 0.0;
  // Dual objective 1/2 |w|^2 - sum(alpha) at the start of every epoch and
  // once more at exit. Never increases.
  std::vector<double> objective_trace;

  double decision_value(const FeatureVector& x) const;
};

// Minimizes 1/2 |w|^2 + c * sum_i max(0, 1 - y_i (w.x_i + b)) with an
// unregularized bias. Labels are +1/-1 and both signs must occur. Columns of
// x must be below dimension.
//
// The solver works on the dual (box constraints plus sum_i alpha_i y_i = 0)
// with two-coordinate steps that keep the equality constraint satisfied.
// Each epoch computes all gradients once, then steps through violating
// pairs formed by matching the most violating "up" candidates with the most
// violating "low" candidates, re-evaluating each pair exactly before the
// step. Every step is an exact line search, so the dual objective never
// increases; the first pair of each epoch is the maximal violating pair,
// which gives the usual SMO convergence guarantee.
BinarySvm train_binary_svm(std::span<const FeatureVector> x,
                           std::span<const int> y, std::size_t dimension,
                           double c, const TrainConfig& config);

double primal_objective(const BinarySvm& svm, std::span<const FeatureVector> x,
                        std::span<const int> y, double c);

// Index of the largest score; ties go to the lowest index.
std::size_t argmax_class(std::span<const double> scores);

// One-vs-rest linear classifier together with its featurizer.
class LinearModel {
 public:
  LinearModel() = default;

  // Throws ConfigError unless there is one weight vector of length
  // index.size() and one bias per class, and chosen_c is positive.
  LinearModel(std::vector<std::string> classes,
              std::vector<std::vector<double>> weights,
              std::vector<double> biases, FeatureSpec spec, FeatureIndex index,
              double chosen_c);

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& biases() const { return biases_; }
  const FeatureSpec& feature_spec() const { return spec_; }
  const FeatureIndex& feature_index() const { return index_; }
  double chosen_c() const { return chosen_c_; }

  // Normalizes raw text and vectorizes it against the model's index.
  // Whitespace-only text yields an empty vector.
  FeatureVector featurize(std::string_view raw) const;

  // score[k] = w_k.v + b_k.
  std::vector<double> decision_values(const FeatureVector& v) const;

  std::size_t predict_index(const FeatureVector& v) const;
  const std::string& predict(std::string_view raw) const;

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> biases_;
  FeatureSpec spec_;
  FeatureIndex index_;
  double chosen_c_ = 1.0;
};

// One binary problem per label of train.labels() (that label +1, the rest
// -1) over an index built from train alone. Needs at least two labels, each
// with at least one sentence.
LinearModel train_ovr(const Corpus& train, const FeatureSpec& spec, double c,
                      const TrainConfig& config);

struct GridPoint {
  double c = 0.0;
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracy;
};

struct GridSearchResult {
  double best_c = 0.0;
  std::vector<GridPoint> points;  // c_grid order
};

// k-fold CV for each C; the index is rebuilt from the training folds of
// each split. best_c is the smallest C reaching the top mean accuracy.
GridSearchResult grid_search(const Corpus& train, const FeatureSpec& spec,
                             const TrainConfig& config);

// Machine-readable grid report: header, one row per C, then best_c.
void write_grid_report(std::ostream& out, const GridSearchResult& result);

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Binary layout (little endian): "DIALMODL", u32 version, feature spec,
// embedded feature index, u32 class count, per class the label, u64
// dimension, f64 weights, f64 bias; then f64 chosen C and an "END!" trailer.
void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);

void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace dialectid

#endif  // DIALECTID_SVM_H_
