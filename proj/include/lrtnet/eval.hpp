#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lrtnet/data.hpp"
#include "lrtnet/loss.hpp"
#include "lrtnet/network.hpp"

namespace lrtnet {

enum class CriterionMode { DifferenceMax, SumMin };

struct EvalReport {
  double err1 = 0.0;    // class-1 error fraction
  double err2 = 0.0;    // class-2 error fraction
  double avg = 0.0;     // (err1 + err2) / 2
  double pooled = 0.0;  // total errors / (n1 + n2)
  double j_hat = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<std::size_t> misclassified1;
  std::vector<std::size_t> misclassified2;
};

struct Snapshot {
  std::uint64_t iteration = 0;
  double err1 = 0.0;
  double err2 = 0.0;
  double avg = 0.0;
  double j_hat = 0.0;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

using EvolutionLog = std::vector<Snapshot>;

// Classifier outputs D(X) for every row, D = z (CatA, LegacySum) or tanh(z) (CatB).
Vector classifier_outputs(const NetParams& params, const OutputNonlinearity& omega, const Matrix& samples);

// Errors from classifier outputs: class 1 errs iff D < 0, class 2 iff D >= 0.
EvalReport perr_from_outputs(std::span<const double> d1, std::span<const double> d2);

// Difference criterion: (sum phi(D1) - sum phi(D2)) / (N1 + N2).
// Sum criterion:        (sum phi(D1) + sum phi(-D2)) / (N1 + N2).
double j_from_outputs(const PhiSpec& phi, CriterionMode mode, std::span<const double> d1, std::span<const double> d2);

EvalReport empirical_perr(const NetParams& params, const OutputNonlinearity& omega, const LabeledDataset& data);

double empirical_j(const NetParams& params, const PhiSpec& phi, CriterionMode mode, const LabeledDataset& data);

// Both in one pass over the data; fills EvalReport::j_hat.
EvalReport evaluate(const NetParams& params, const PhiSpec& phi, CriterionMode mode, const LabeledDataset& data);

// Header "iteration,err1,err2,avg,j_hat", one row per snapshot, values in
// shortest round-trip form.
void export_evolution_csv(const EvolutionLog& log, const std::filesystem::path& path);
void export_report_json(const EvalReport& report, const std::filesystem::path& path);

}  // namespace lrtnet
