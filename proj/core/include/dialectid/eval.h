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

#ifndef DIALECTID_EVAL_H_
#define DIALECTID_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dialectid/corpus.h"
#include "dialectid/svm.h"

namespace dialectid {

// Rows are actual labels, columns predicted labels.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  // Throws DataError unless counts is labels.size() square.
  ConfusionMatrix(std::vector<std::string> labels,
                  std::vector<std::vector<std::uint64_t>> counts);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<std::uint64_t>>& counts() const {
    return counts_;
  }
  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual][predicted];
  }
  std::uint64_t row_sum(std::size_t actual) const;
  std::uint64_t column_sum(std::size_t predicted) const;
  std::uint64_t trace() const;
  std::uint64_t total() const;

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

// Throws DataError on a length mismatch or a label outside labels.
ConfusionMatrix confusion_matrix(std::span<const std::string> gold,
                                 std::span<const std::string> predicted,
                                 std::span<const std::string> labels);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

// Empty denominators give 0, and f1 is 0 when precision and recall are 0.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

// trace / total. Throws DataError for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const AveragedMetrics&,
                         const AveragedMetrics&) = default;
};

AveragedMetrics macro_average(std::span<const ClassMetrics> metrics);
AveragedMetrics weighted_average(std::span<const ClassMetrics> metrics);

struct EvalReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  AveragedMetrics macro;
  AveragedMetrics weighted;
  ConfusionMatrix confusion;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

EvalReport make_report(ConfusionMatrix cm);

// Predicts every test sentence. Throws DataError if a test label is not a
// model class.
EvalReport evaluate(const LinearModel& model, const Corpus& test);

struct Misclassification {
  std::string text;
  std::string actual;
  std::string predicted;
  std::vector<double> scores;  // model class order
  // Predicted score minus actual-class score; never negative.
  double margin = 0.0;
};

// Misclassified test sentences, smallest margin first (ties keep test order).
std::vector<Misclassification> error_report(const LinearModel& model,
                                            const Corpus& test);

// Human-readable: accuracy as a percentage with three decimals, P/R/F1 with
// two decimals, then the confusion matrix.
std::string format_report(const EvalReport& report);

// Full-precision metrics; parses back with read_metrics_tsv.
void write_metrics_tsv(std::ostream& out, const EvalReport& report);
void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& cm);
void write_error_report_tsv(std::ostream& out,
                            std::span<const Misclassification> errors,
                            std::span<const std::string> classes);

ConfusionMatrix read_confusion_tsv(std::istream& in);
// Reads both files back into a report; throws DataError if the metrics do
// not belong to the confusion matrix.
EvalReport read_eval_report(std::istream& metrics, std::istream& confusion);

}  // namespace dialectid

#endif  // DIALECTID_EVAL_H_
