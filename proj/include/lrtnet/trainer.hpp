#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

#include "lrtnet/data.hpp"
#include "lrtnet/eval.hpp"
#include "lrtnet/loss.hpp"
#include "lrtnet/network.hpp"

namespace lrtnet {

// Denominator guard: updates divide by sqrt(power) + kPowerEpsilon.
inline constexpr double kPowerEpsilon = 1e-12;

// Parameters plus the running power estimates of each gradient element.
//
// Every element follows  P <- lambda P + (1 - lambda) g^2  and then
// theta <- theta +- mu g / (sqrt(P) + eps). Powers start at zero, so the
// first update moves every element with a nonzero gradient by
// mu / sqrt(1 - lambda) regardless of the gradient magnitude. That warm-up
// step is intentional and is not bias-corrected.
struct TrainerState {
  NetParams params;
  Matrix powM;
  Vector powm;
  Vector powN;
  double pown = 0.0;
  double mu = 1e-4;
  double lambda = 0.99;
  std::uint64_t t = 0;  // completed steps
};

TrainerState make_trainer_state(NetParams params, double mu, double lambda);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::uint64_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  std::uint64_t iteration() const { return iteration_; }

 private:
  std::uint64_t iteration_;
};

// Throws std::invalid_argument unless DifferenceMax is paired with a CatA or
// CatB phi, or SumMin with a LegacySum phi.
void check_pairing(const PhiSpec& phi, CriterionMode mode);

// One full-batch iteration. DifferenceMax ascends on the difference of the
// per-class gradient sums; SumMin descends on sum phi(z) + sum phi(-z).
void batch_step(TrainerState& state, const LabeledDataset& data, const PhiSpec& phi, CriterionMode mode);

// One single-sample iteration; label is 1 or 2. DifferenceMax ascends on
// eps * omega(z) with eps = +1 for class 1 and -1 for class 2; SumMin
// descends on phi(eps * z).
void sgd_step(TrainerState& state, std::span<const double> x, int label, const PhiSpec& phi, CriterionMode mode);

enum class TrainMode { batch, sgd };

struct TrainRun {
  TrainMode mode = TrainMode::sgd;
  CriterionMode criterion = CriterionMode::DifferenceMax;
  PhiSpec phi;
  std::size_t n_hidden = 100;
  double mu = 1e-4;
  double lambda = 0.99;
  std::uint64_t iterations = 1;
  SamplingPolicy policy = SamplingPolicy::permuted;
  std::uint64_t eval_every = 100;
  std::uint64_t seed = 0;
};

struct TrainResult {
  TrainerState state;
  EvolutionLog log;
};

using SnapshotCallback = std::function<void(const Snapshot&)>;

// Runs `iterations` ticks. A tick is one batch step, one permuted sample, or
// one class-1/class-2 pair of samples. Snapshots on `eval` are taken every
// `eval_every` ticks and after the last tick. Parameters start from `initial`
// when given, otherwise from glorot_init(n_hidden, k, seed).
TrainResult train(const TrainRun& run, const LabeledDataset& training, const LabeledDataset& eval,
                  std::optional<NetParams> initial = std::nullopt, const SnapshotCallback& on_snapshot = {});

}  // namespace lrtnet
