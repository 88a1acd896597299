#include "provkit/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace provkit {

namespace {

bool is_positive(Label label) {
  // NearCopy is a detected paraphrase, so it lands in the positive class.
  return label == Label::ChatGPTParaphrase || label == Label::NearCopy;
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fn += other.fn;
  fp += other.fp;
  tn += other.tn;
  return *this;
}

ConfusionMatrix score_run(std::span<const LabeledOutcome> outcomes) {
  if (outcomes.empty()) {
    throw std::invalid_argument("cannot score an empty run");
  }
  ConfusionMatrix cm;
  for (const auto& outcome : outcomes) {
    const bool predicted = is_positive(outcome.predicted);
    const bool actual = is_positive(outcome.truth);
    if (actual) {
      predicted ? ++cm.tp : ++cm.fn;
    } else {
      predicted ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MetricSet metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw std::invalid_argument("metrics need a non-empty confusion matrix");
  }
  const auto ratio = [](std::uint64_t num,
                        std::uint64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };

  MetricSet m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  if (m.precision && m.sensitivity && (*m.precision + *m.sensitivity) > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.sensitivity /
           (*m.precision + *m.sensitivity);
  }
  return m;
}

MetricSet aggregate(std::span<const ConfusionMatrix> matrices) {
  if (matrices.empty()) {
    throw std::invalid_argument("aggregate needs at least one matrix");
  }
  ConfusionMatrix sum;
  for (const auto& cm : matrices) sum += cm;
  return metrics(sum);
}

double round_percent(double fraction) {
  return std::floor(fraction * 10000.0 + 0.5) / 100.0;
}

std::string format_percent(std::optional<double> fraction) {
  if (!fraction) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", round_percent(*fraction));
  return buf;
}

namespace {

nlohmann::json metric_set_to_json(const MetricSet& m) {
  auto field = [](std::optional<double> v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return nlohmann::json{{"accuracy", field(m.accuracy)},
                        {"precision", field(m.precision)},
                        {"sensitivity", field(m.sensitivity)},
                        {"specificity", field(m.specificity)},
                        {"f1", field(m.f1)}};
}

nlohmann::json category_to_json(const CategoryReport& report) {
  return nlohmann::json{
      {"category", report.category},
      {"confusion",
       {{"tp", report.confusion.tp},
        {"fn", report.confusion.fn},
        {"fp", report.confusion.fp},
        {"tn", report.confusion.tn}}},
      {"metrics", metric_set_to_json(report.metric_set)},
      {"near_copy_count", report.near_copy_count}};
}

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : per_category) cats.push_back(category_to_json(c));
  return nlohmann::json{{"run_id", run_id},
                        {"config", config},
                        {"per_category", cats},
                        {"overall", category_to_json(overall)}};
}

void RunReport::write_csv(std::ostream& out) const {
  out << "metric";
  for (const auto& c : per_category) out << ',' << c.category;
  out << ",overall\n";

  const auto row = [&](const char* name, auto selector) {
    out << name;
    for (const auto& c : per_category) {
      out << ',' << format_percent(selector(c.metric_set));
    }
    out << ',' << format_percent(selector(overall.metric_set)) << '\n';
  };
  row("accuracy", [](const MetricSet& m) { return m.accuracy; });
  row("precision", [](const MetricSet& m) { return m.precision; });
  row("sensitivity", [](const MetricSet& m) { return m.sensitivity; });
  row("specificity", [](const MetricSet& m) { return m.specificity; });
  row("f1", [](const MetricSet& m) { return m.f1; });
}

RunReport build_report(std::string run_id, nlohmann::json config,
                       std::span<const CategoryReport> categories) {
  RunReport report;
  report.run_id = std::move(run_id);
  report.config = std::move(config);
  report.per_category.assign(categories.begin(), categories.end());

  report.overall.category = "overall";
  for (const auto& c : categories) {
    report.overall.confusion += c.confusion;
    report.overall.near_copy_count += c.near_copy_count;
  }
  report.overall.metric_set = metrics(report.overall.confusion);
  return report;
}

}  // namespace provkit
