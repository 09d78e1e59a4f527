#include "lrtnet/trainer.hpp"

#include <cmath>
#include <string>

namespace lrtnet {

namespace {

void require_state_shape(const TrainerState& s, std::size_t k) {
  const std::size_t n = s.params.hidden();
  if (!s.params.consistent() || s.params.inputs() != k || s.powM.rows() != n || s.powM.cols() != k ||
      s.powm.size() != n || s.powN.size() != n)
    throw std::invalid_argument("trainer state does not match data dimension " + std::to_string(k));
}

double update_element(double& theta, double& power, double g, double step, double lambda) {
  power = lambda * power + (1.0 - lambda) * g * g;
  theta += step * g / (std::sqrt(power) + kPowerEpsilon);
  return theta;
}

// Applies theta <- theta + direction * mu * g / (sqrt(P) + eps) to every
// parameter after refreshing its power estimate.
void apply_update(TrainerState& s, const ParamGradient& g, double direction) {
  const double step = direction * s.mu;
  const double lambda = s.lambda;
  bool finite = true;
  auto& A = s.params.A.data();
  auto& M = s.powM.data();
  const auto& gA = g.gA.data();
  for (std::size_t i = 0; i < A.size(); ++i) finite &= std::isfinite(update_element(A[i], M[i], gA[i], step, lambda));
  for (std::size_t i = 0; i < s.params.a.size(); ++i) {
    finite &= std::isfinite(update_element(s.params.a[i], s.powm[i], g.ga[i], step, lambda));
    finite &= std::isfinite(update_element(s.params.B[i], s.powN[i], g.gB[i], step, lambda));
  }
  finite &= std::isfinite(update_element(s.params.b, s.pown, g.gb, step, lambda));
  ++s.t;
  if (!finite)
    throw DivergenceError(s.t, "training diverged: non-finite parameter after iteration " + std::to_string(s.t));
}

void accumulate(ParamGradient& acc, const ParamGradient& g, double sign) {
  auto& A = acc.gA.data();
  const auto& gA = g.gA.data();
  for (std::size_t i = 0; i < A.size(); ++i) A[i] += sign * gA[i];
  for (std::size_t i = 0; i < acc.ga.size(); ++i) {
    acc.ga[i] += sign * g.ga[i];
    acc.gB[i] += sign * g.gB[i];
  }
  acc.gb += sign * g.gb;
}

ParamGradient zero_gradient(std::size_t n, std::size_t k) {
  ParamGradient g;
  g.gA = Matrix(n, k);
  g.ga.assign(n, 0.0);
  g.gB.assign(n, 0.0);
  return g;
}

// Gradient of the per-sample objective term and the scale applied to grad(z).
//   DifferenceMax: omega'(z)               (the sign eps is applied by the caller)
//   SumMin:        eps * phi'(eps * z)
double objective_scale(const PhiSpec& phi, const OutputNonlinearity& omega, CriterionMode mode, double z, int label) {
  if (mode == CriterionMode::DifferenceMax) return omega.omega_prime(z);
  const double eps = label == 1 ? 1.0 : -1.0;
  return eps * phi.phi_prime(eps * z);
}

}  // namespace

TrainerState make_trainer_state(NetParams params, double mu, double lambda) {
  if (!params.consistent()) throw std::invalid_argument("inconsistent network parameters");
  if (!(mu > 0.0)) throw std::invalid_argument("learning rate mu must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("forgetting factor lambda must lie in (0, 1)");
  TrainerState s;
  const std::size_t n = params.hidden(), k = params.inputs();
  s.params = std::move(params);
  s.powM = Matrix(n, k);
  s.powm.assign(n, 0.0);
  s.powN.assign(n, 0.0);
  s.mu = mu;
  s.lambda = lambda;
  return s;
}

void check_pairing(const PhiSpec& phi, CriterionMode mode) {
  const bool legacy = phi.category == PhiCategory::LegacySum;
  if (mode == CriterionMode::DifferenceMax && legacy)
    throw std::invalid_argument("difference criterion needs a CatA or CatB phi, got " + phi.name);
  if (mode == CriterionMode::SumMin && !legacy)
    throw std::invalid_argument("sum criterion needs a LegacySum phi, got " + phi.name);
}

void batch_step(TrainerState& state, const LabeledDataset& data, const PhiSpec& phi, CriterionMode mode) {
  check_pairing(phi, mode);
  if (data.n1() == 0 || data.n2() == 0) throw std::invalid_argument("batch_step needs both classes nonempty");
  require_state_shape(state, data.k());
  const auto omega = make_output(phi);
  const std::size_t n = state.params.hidden(), k = data.k();

  // DifferenceMax: G = sum_1 grad omega - sum_2 grad omega (ascent).
  // SumMin:        G = sum_1 grad phi(z) + sum_2 grad phi(-z) (descent).
  ParamGradient total = zero_gradient(n, k);
  ParamGradient g = zero_gradient(n, k);
  for (int label : {1, 2}) {
    const Matrix& samples = data.of(label);
    const double sign = mode == CriterionMode::DifferenceMax && label == 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
      const auto x = samples.row(i);
      const ForwardTrace trace = forward(state.params, x, omega);
      scaled_pre_output_gradient(state.params, x, trace, objective_scale(phi, omega, mode, trace.z, label), g);
      accumulate(total, g, sign);
    }
  }
  apply_update(state, total, mode == CriterionMode::DifferenceMax ? 1.0 : -1.0);
}

void sgd_step(TrainerState& state, std::span<const double> x, int label, const PhiSpec& phi, CriterionMode mode) {
  check_pairing(phi, mode);
  if (label != 1 && label != 2) throw std::invalid_argument("label must be 1 or 2");
  require_state_shape(state, x.size());
  const auto omega = make_output(phi);
  const ForwardTrace trace = forward(state.params, x, omega);
  ParamGradient g;
  scaled_pre_output_gradient(state.params, x, trace, objective_scale(phi, omega, mode, trace.z, label), g);
  const double eps = label == 1 ? 1.0 : -1.0;
  apply_update(state, g, mode == CriterionMode::DifferenceMax ? eps : -1.0);
}

TrainResult train(const TrainRun& run, const LabeledDataset& training, const LabeledDataset& eval,
                  std::optional<NetParams> initial, const SnapshotCallback& on_snapshot) {
  if (run.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (run.eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
  check_pairing(run.phi, run.criterion);
  training.validate();
  if (eval.k() != training.k()) throw std::invalid_argument("evaluation data dimension differs from training data");

  NetParams start = initial ? std::move(*initial) : glorot_init(run.n_hidden, training.k(), run.seed);
  if (start.inputs() != training.k()) throw std::invalid_argument("initial parameters do not match data dimension");

  TrainResult result{make_trainer_state(std::move(start), run.mu, run.lambda), {}};
  MergedIterator stream(training, run.policy, run.seed);

  for (std::uint64_t tick = 1; tick <= run.iterations; ++tick) {
    if (run.mode == TrainMode::batch) {
      batch_step(result.state, training, run.phi, run.criterion);
    } else {
      for (const SampleRef& s : stream.next()) sgd_step(result.state, s.x, s.label, run.phi, run.criterion);
    }
    if (tick % run.eval_every == 0 || tick == run.iterations) {
      const EvalReport r = evaluate(result.state.params, run.phi, run.criterion, eval);
      result.log.push_back({tick, r.err1, r.err2, r.avg, r.j_hat});
      if (on_snapshot) on_snapshot(result.log.back());
    }
  }
  return result;
}

}  // namespace lrtnet
