#include "lrtnet/eval.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace lrtnet {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void require_nonempty(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("evaluation requires both classes nonempty");
}

}  // namespace

Vector classifier_outputs(const NetParams& params, const OutputNonlinearity& omega, const Matrix& samples) {
  Vector out(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) out[i] = omega.decision(pre_output(params, samples.row(i)));
  return out;
}

EvalReport perr_from_outputs(std::span<const double> d1, std::span<const double> d2) {
  require_nonempty(d1.size(), d2.size());
  EvalReport r;
  r.n1 = d1.size();
  r.n2 = d2.size();
  for (std::size_t i = 0; i < d1.size(); ++i)
    if (d1[i] < 0.0) r.misclassified1.push_back(i);
  for (std::size_t i = 0; i < d2.size(); ++i)
    if (d2[i] >= 0.0) r.misclassified2.push_back(i);
  r.err1 = static_cast<double>(r.misclassified1.size()) / static_cast<double>(r.n1);
  r.err2 = static_cast<double>(r.misclassified2.size()) / static_cast<double>(r.n2);
  r.avg = 0.5 * (r.err1 + r.err2);
  r.pooled = static_cast<double>(r.misclassified1.size() + r.misclassified2.size()) / static_cast<double>(r.n1 + r.n2);
  return r;
}

double j_from_outputs(const PhiSpec& phi, CriterionMode mode, std::span<const double> d1, std::span<const double> d2) {
  require_nonempty(d1.size(), d2.size());
  double acc = 0.0;
  for (double d : d1) acc += phi.phi(d);
  if (mode == CriterionMode::DifferenceMax) {
    for (double d : d2) acc -= phi.phi(d);
  } else {
    for (double d : d2) acc += phi.phi(-d);
  }
  return acc / static_cast<double>(d1.size() + d2.size());
}

EvalReport evaluate(const NetParams& params, const PhiSpec& phi, CriterionMode mode, const LabeledDataset& data) {
  const auto omega = make_output(phi);
  const Vector d1 = classifier_outputs(params, omega, data.class1);
  const Vector d2 = classifier_outputs(params, omega, data.class2);
  EvalReport r = perr_from_outputs(d1, d2);
  r.j_hat = j_from_outputs(phi, mode, d1, d2);
  return r;
}

EvalReport empirical_perr(const NetParams& params, const OutputNonlinearity& omega, const LabeledDataset& data) {
  return perr_from_outputs(classifier_outputs(params, omega, data.class1),
                           classifier_outputs(params, omega, data.class2));
}

double empirical_j(const NetParams& params, const PhiSpec& phi, CriterionMode mode, const LabeledDataset& data) {
  const auto omega = make_output(phi);
  return j_from_outputs(phi, mode, classifier_outputs(params, omega, data.class1),
                        classifier_outputs(params, omega, data.class2));
}

void export_evolution_csv(const EvolutionLog& log, const std::filesystem::path& path) {
  std::string text = "iteration,err1,err2,avg,j_hat\n";
  for (const auto& s : log) {
    text += std::to_string(s.iteration);
    for (double v : {s.err1, s.err2, s.avg, s.j_hat}) {
      text += ',';
      append_number(text, v);
    }
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write evolution CSV: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing evolution CSV: " + path.string());
}

void export_report_json(const EvalReport& report, const std::filesystem::path& path) {
  const nlohmann::json j = {
      {"err1", report.err1},
      {"err2", report.err2},
      {"avg", report.avg},
      {"pooled", report.pooled},
      {"j_hat", report.j_hat},
      {"n1", report.n1},
      {"n2", report.n2},
      {"misclassified_indices", {report.misclassified1, report.misclassified2}},
  };
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report JSON: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing report JSON: " + path.string());
}

}  // namespace lrtnet
