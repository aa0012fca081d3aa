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

#include "dialectid/eval.h"

#include <algorithm>
#include <sstream>
#include <string>
#include <unordered_map>

#include "dialectid/error.h"
#include "dialectid/unicode.h"
#include "number_format.h"

namespace dialectid {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels,
                                 std::vector<std::vector<std::uint64_t>> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.size() != labels_.size()) {
    throw DataError("confusion matrix row count differs from label count");
  }
  for (const auto& row : counts_) {
    if (row.size() != labels_.size()) {
      throw DataError("confusion matrix is not square");
    }
  }
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
  std::uint64_t s = 0;
  for (std::uint64_t c : counts_[actual]) s += c;
  return s;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (const auto& row : counts_) s += row[predicted];
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) s += counts_[k][k];
  return s;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) s += row_sum(k);
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> gold,
                                 std::span<const std::string> predicted,
                                 std::span<const std::string> labels) {
  if (gold.size() != predicted.size()) {
    throw DataError("gold and predicted sequences differ in length (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(predicted.size()) + ")");
  }
  std::unordered_map<std::string_view, std::size_t> id;
  for (std::size_t k = 0; k < labels.size(); ++k) id.emplace(labels[k], k);
  const auto lookup = [&](const std::string& label) {
    const auto it = id.find(label);
    if (it == id.end()) throw DataError("label '" + label + "' is not in the inventory");
    return it->second;
  };
  std::vector<std::vector<std::uint64_t>> counts(
      labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++counts[lookup(gold[i])][lookup(predicted[i])];
  }
  return ConfusionMatrix({labels.begin(), labels.end()}, std::move(counts));
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  std::vector<ClassMetrics> out;
  for (std::size_t k = 0; k < cm.labels().size(); ++k) {
    const auto hit = static_cast<double>(cm.at(k, k));
    const std::uint64_t predicted = cm.column_sum(k);
    const std::uint64_t actual = cm.row_sum(k);
    ClassMetrics m;
    m.label = cm.labels()[k];
    m.precision = predicted == 0 ? 0.0 : hit / static_cast<double>(predicted);
    m.recall = actual == 0 ? 0.0 : hit / static_cast<double>(actual);
    m.f1 = m.precision + m.recall == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.support = actual;
    out.push_back(std::move(m));
  }
  return out;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw DataError("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

AveragedMetrics macro_average(std::span<const ClassMetrics> metrics) {
  AveragedMetrics out;
  if (metrics.empty()) return out;
  for (const auto& m : metrics) {
    out.precision += m.precision;
    out.recall += m.recall;
    out.f1 += m.f1;
  }
  const auto n = static_cast<double>(metrics.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

AveragedMetrics weighted_average(std::span<const ClassMetrics> metrics) {
  AveragedMetrics out;
  std::uint64_t total = 0;
  for (const auto& m : metrics) {
    const auto w = static_cast<double>(m.support);
    out.precision += w * m.precision;
    out.recall += w * m.recall;
    out.f1 += w * m.f1;
    total += m.support;
  }
  if (total == 0) return {};
  const auto n = static_cast<double>(total);
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

EvalReport make_report(ConfusionMatrix cm) {
  EvalReport report;
  report.accuracy = accuracy(cm);
  report.per_class = per_class_metrics(cm);
  report.macro = macro_average(report.per_class);
  report.weighted = weighted_average(report.per_class);
  report.confusion = std::move(cm);
  return report;
}

namespace {

std::size_t class_of(const LinearModel& model, const std::string& label) {
  const auto& classes = model.classes();
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    throw DataError("test label '" + label + "' is not a model class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

EvalReport evaluate(const LinearModel& model, const Corpus& test) {
  std::vector<std::string> gold;
  std::vector<std::string> predicted;
  gold.reserve(test.size());
  predicted.reserve(test.size());
  for (const auto& s : test.sentences()) {
    class_of(model, s.label);
    gold.push_back(s.label);
    predicted.push_back(model.predict(s.text));
  }
  return make_report(confusion_matrix(gold, predicted, model.classes()));
}

std::vector<Misclassification> error_report(const LinearModel& model,
                                            const Corpus& test) {
  std::vector<Misclassification> errors;
  for (const auto& s : test.sentences()) {
    const std::size_t actual = class_of(model, s.label);
    std::vector<double> scores = model.decision_values(model.featurize(s.text));
    const std::size_t predicted = argmax_class(scores);
    if (predicted == actual) continue;
    Misclassification e;
    e.text = s.text;
    e.actual = s.label;
    e.predicted = model.classes()[predicted];
    e.margin = scores[predicted] - scores[actual];
    e.scores = std::move(scores);
    errors.push_back(std::move(e));
  }
  std::stable_sort(errors.begin(), errors.end(),
                   [](const auto& a, const auto& b) { return a.margin < b.margin; });
  return errors;
}

namespace {

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  const std::size_t len = unicode::codepoint_count(s);
  if (len < width) out.append(width - len, ' ');
  return out;
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  const auto& labels = report.confusion.labels();
  std::size_t width = std::string_view("weighted avg").size();
  for (const auto& l : labels) width = std::max(width, unicode::codepoint_count(l));
  width += 2;

  out << "accuracy: " << internal::fixed(100.0 * report.accuracy, 3) << "%\n\n";
  out << pad("", width) << "precision  recall  f1    support\n";
  const auto row = [&](std::string_view name, double p, double r, double f,
                       std::uint64_t support) {
    out << pad(name, width) << pad(internal::fixed(p, 2), 11)
        << pad(internal::fixed(r, 2), 8) << pad(internal::fixed(f, 2), 6) << support
        << '\n';
  };
  for (const auto& m : report.per_class) {
    row(m.label, m.precision, m.recall, m.f1, m.support);
  }
  const std::uint64_t total = report.confusion.total();
  row("macro avg", report.macro.precision, report.macro.recall, report.macro.f1, total);
  row("weighted avg", report.weighted.precision, report.weighted.recall,
      report.weighted.f1, total);

  out << "\nconfusion matrix (rows: actual, columns: predicted)\n";
  std::size_t cell = 1;
  for (const auto& l : labels) cell = std::max(cell, unicode::codepoint_count(l));
  for (const auto& r : report.confusion.counts()) {
    for (std::uint64_t c : r) cell = std::max(cell, std::to_string(c).size());
  }
  cell += 2;
  out << pad("", width);
  for (const auto& l : labels) out << pad(l, cell);
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << pad(labels[i], width);
    for (std::uint64_t c : report.confusion.counts()[i]) out << pad(std::to_string(c), cell);
    out << '\n';
  }
  return out.str();
}

namespace {

using internal::round_trip;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

constexpr std::string_view kMetricsHeader = "kind\tlabel\tprecision\trecall\tf1\tsupport";

}  // namespace

void write_metrics_tsv(std::ostream& out, const EvalReport& report) {
  const std::uint64_t total = report.confusion.total();
  out << kMetricsHeader << '\n';
  out << "accuracy\t*\t" << round_trip(report.accuracy) << "\t-\t-\t" << total << '\n';
  for (const auto& m : report.per_class) {
    out << "class\t" << m.label << '\t' << round_trip(m.precision) << '\t'
        << round_trip(m.recall) << '\t' << round_trip(m.f1) << '\t' << m.support << '\n';
  }
  for (const auto& [kind, avg] : {std::pair{"macro", report.macro},
                                  std::pair{"weighted", report.weighted}}) {
    out << kind << "\t*\t" << round_trip(avg.precision) << '\t' << round_trip(avg.recall)
        << '\t' << round_trip(avg.f1) << '\t' << total << '\n';
  }
}

void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "actual/predicted";
  for (const auto& l : cm.labels()) out << '\t' << l;
  out << '\n';
  for (std::size_t i = 0; i < cm.labels().size(); ++i) {
    out << cm.labels()[i];
    for (std::uint64_t c : cm.counts()[i]) out << '\t' << c;
    out << '\n';
  }
}

void write_error_report_tsv(std::ostream& out,
                            std::span<const Misclassification> errors,
                            std::span<const std::string> classes) {
  out << "actual\tpredicted\tmargin";
  for (const auto& c : classes) out << "\tscore:" << c;
  out << "\tsentence\n";
  for (const auto& e : errors) {
    out << e.actual << '\t' << e.predicted << '\t' << round_trip(e.margin);
    for (double s : e.scores) out << '\t' << round_trip(s);
    out << '\t' << e.text << '\n';
  }
}

ConfusionMatrix read_confusion_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty confusion matrix file");
  const auto header = split_tabs(line);
  std::vector<std::string> labels(header.begin() + 1, header.end());
  std::vector<std::vector<std::uint64_t>> counts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != labels.size() + 1) {
      throw DataError("confusion matrix row has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(labels.size() + 1));
    }
    if (counts.size() >= labels.size() || cells[0] != labels[counts.size()]) {
      throw DataError("confusion matrix rows do not follow the header labels");
    }
    std::vector<std::uint64_t> row;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      row.push_back(internal::parse_integer<std::uint64_t>(cells[k], "count"));
    }
    counts.push_back(std::move(row));
  }
  return ConfusionMatrix(std::move(labels), std::move(counts));
}

EvalReport read_eval_report(std::istream& metrics, std::istream& confusion) {
  EvalReport report;
  report.confusion = read_confusion_tsv(confusion);
  std::string line;
  if (!std::getline(metrics, line) || line != kMetricsHeader) {
    throw DataError("metrics file lacks the expected header");
  }
  bool have_accuracy = false;
  bool have_macro = false;
  bool have_weighted = false;
  while (std::getline(metrics, line)) {
    if (line.empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 6) throw DataError("metrics row must have 6 cells");
    const std::string_view kind = cells[0];
    if (kind == "accuracy") {
      report.accuracy = internal::parse_double(cells[2], "accuracy");
      have_accuracy = true;
      continue;
    }
    const double p = internal::parse_double(cells[2], "precision");
    const double r = internal::parse_double(cells[3], "recall");
    const double f = internal::parse_double(cells[4], "f1");
    if (kind == "class") {
      report.per_class.push_back(
          {std::string(cells[1]), p, r, f,
           internal::parse_integer<std::uint64_t>(cells[5], "support")});
    } else if (kind == "macro") {
      report.macro = {p, r, f};
      have_macro = true;
    } else if (kind == "weighted") {
      report.weighted = {p, r, f};
      have_weighted = true;
    } else {
      throw DataError("unknown metrics row kind '" + std::string(kind) + "'");
    }
  }
  if (!have_accuracy || !have_macro || !have_weighted) {
    throw DataError("metrics file is missing accuracy or average rows");
  }
  const auto& labels = report.confusion.labels();
  if (report.per_class.size() != labels.size()) {
    throw DataError("metrics and confusion matrix disagree on the class count");
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (report.per_class[k].label != labels[k] ||
        report.per_class[k].support != report.confusion.row_sum(k)) {
      throw DataError("metrics row for '" + report.per_class[k].label +
                      "' does not match the confusion matrix");
    }
  }
  return report;
}

}  // namespace dialectid
