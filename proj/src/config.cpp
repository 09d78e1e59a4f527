#include "lrtnet/config.hpp"

#include <array>
#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

namespace lrtnet {

using nlohmann::json;

namespace {

template <typename E>
using NameTable = std::vector<std::pair<E, const char*>>;

const NameTable<Experiment> kExperiments = {
    {Experiment::synthetic, "synthetic"}, {Experiment::mnist, "mnist"},
    {Experiment::cifar, "cifar"},         {Experiment::custom, "custom"}};
const NameTable<TrainMode> kModes = {{TrainMode::sgd, "sgd"}, {TrainMode::batch, "batch"}};
const NameTable<CriterionMode> kCriteria = {{CriterionMode::DifferenceMax, "difference"},
                                            {CriterionMode::SumMin, "sum"}};
const NameTable<SamplingPolicy> kPolicies = {{SamplingPolicy::permuted, "permuted"},
                                             {SamplingPolicy::alternating_pairs, "alternating_pairs"}};

template <typename E>
const char* name_of(const NameTable<E>& table, E value) {
  for (const auto& [v, n] : table)
    if (v == value) return n;
  return "?";
}

template <typename E>
std::optional<E> lookup(const NameTable<E>& table, const std::string& name) {
  for (const auto& [v, n] : table)
    if (name == n) return v;
  return std::nullopt;
}

template <typename E>
std::string choices(const NameTable<E>& table) {
  std::string s;
  for (const auto& [v, n] : table) s += (s.empty() ? "" : "|") + std::string(n);
  return s;
}

// Collects per-field parse failures instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  template <typename T>
  void get(const json& obj, const char* key, T& target, const std::string& prefix = "") {
    if (!obj.contains(key)) return;
    try {
      target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      out_.push_back({prefix + key, std::string("wrong type: ") + e.what()});
    }
  }

  template <typename E>
  void get_enum(const json& obj, const char* key, E& target, const NameTable<E>& table) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
      out_.push_back({key, "expected one of " + choices(table)});
      return;
    }
    if (auto e = lookup(table, v.get<std::string>()))
      target = *e;
    else
      out_.push_back({key, "unknown value '" + v.get<std::string>() + "', expected " + choices(table)});
  }

  void unknown_keys(const json& obj, std::initializer_list<const char*> known, const std::string& prefix = "") {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) out_.push_back({prefix + k, "unknown key"});
  }

  void fail(std::string field, std::string message) { out_.push_back({std::move(field), std::move(message)}); }

 private:
  std::vector<Violation>& out_;
};

Vector as_vector(const json& v) {
  if (v.is_number()) return {v.get<double>()};
  return v.get<Vector>();
}

MixtureDensity mixture_from_json(const json& j) {
  MixtureDensity d;
  for (const auto& c : j) {
    if (!c.is_array() || c.size() != 3) throw std::invalid_argument("each component must be [weight, mean, variance]");
    d.components.push_back({c[0].get<double>(), as_vector(c[1]), as_vector(c[2])});
  }
  return d;
}

json mixture_to_json(const MixtureDensity& d) {
  json arr = json::array();
  for (const auto& c : d.components) {
    if (c.mean.size() == 1)
      arr.push_back({c.weight, c.mean[0], c.variance[0]});
    else
      arr.push_back({c.weight, c.mean, c.variance});
  }
  return arr;
}

void parse_dataset(const json& ds, RunConfig& cfg, Reader& r) {
  const std::string p = "dataset.";
  switch (cfg.experiment) {
    case Experiment::synthetic: {
      r.unknown_keys(ds, {"p1", "f1", "f2", "n_train_per_class", "n_test_per_class"}, p);
      r.get(ds, "p1", cfg.synthetic.pair.p1, p);
      for (const char* key : {"f1", "f2"}) {
        if (!ds.contains(key)) continue;
        try {
          (key[1] == '1' ? cfg.synthetic.pair.f1 : cfg.synthetic.pair.f2) = mixture_from_json(ds.at(key));
        } catch (const std::exception& e) {
          r.fail(p + key, e.what());
        }
      }
      r.get(ds, "n_train_per_class", cfg.synthetic.n_train_per_class, p);
      r.get(ds, "n_test_per_class", cfg.synthetic.n_test_per_class, p);
      break;
    }
    case Experiment::mnist:
      r.unknown_keys(ds, {"root", "train_images", "train_labels", "test_images", "test_labels", "class_a", "class_b",
                          "max_per_class"},
                     p);
      r.get(ds, "root", cfg.mnist.root, p);
      r.get(ds, "train_images", cfg.mnist.train_images, p);
      r.get(ds, "train_labels", cfg.mnist.train_labels, p);
      r.get(ds, "test_images", cfg.mnist.test_images, p);
      r.get(ds, "test_labels", cfg.mnist.test_labels, p);
      r.get(ds, "class_a", cfg.mnist.class_a, p);
      r.get(ds, "class_b", cfg.mnist.class_b, p);
      r.get(ds, "max_per_class", cfg.mnist.max_per_class, p);
      break;
    case Experiment::cifar:
      r.unknown_keys(ds, {"root", "train_files", "test_files", "class_a", "class_b", "max_per_class"}, p);
      r.get(ds, "root", cfg.cifar.root, p);
      r.get(ds, "train_files", cfg.cifar.train_files, p);
      r.get(ds, "test_files", cfg.cifar.test_files, p);
      r.get(ds, "class_a", cfg.cifar.class_a, p);
      r.get(ds, "class_b", cfg.cifar.class_b, p);
      r.get(ds, "max_per_class", cfg.cifar.max_per_class, p);
      break;
    case Experiment::custom:
      r.unknown_keys(ds, {"train_class1", "train_class2", "test_class1", "test_class2"}, p);
      r.get(ds, "train_class1", cfg.custom.train_class1, p);
      r.get(ds, "train_class2", cfg.custom.train_class2, p);
      r.get(ds, "test_class1", cfg.custom.test_class1, p);
      r.get(ds, "test_class2", cfg.custom.test_class2, p);
      break;
  }
}

json dataset_to_json(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::synthetic:
      return {{"p1", cfg.synthetic.pair.p1},
              {"f1", mixture_to_json(cfg.synthetic.pair.f1)},
              {"f2", mixture_to_json(cfg.synthetic.pair.f2)},
              {"n_train_per_class", cfg.synthetic.n_train_per_class},
              {"n_test_per_class", cfg.synthetic.n_test_per_class}};
    case Experiment::mnist:
      return {{"root", cfg.mnist.root},
              {"train_images", cfg.mnist.train_images},
              {"train_labels", cfg.mnist.train_labels},
              {"test_images", cfg.mnist.test_images},
              {"test_labels", cfg.mnist.test_labels},
              {"class_a", cfg.mnist.class_a},
              {"class_b", cfg.mnist.class_b},
              {"max_per_class", cfg.mnist.max_per_class}};
    case Experiment::cifar:
      return {{"root", cfg.cifar.root},
              {"train_files", cfg.cifar.train_files},
              {"test_files", cfg.cifar.test_files},
              {"class_a", cfg.cifar.class_a},
              {"class_b", cfg.cifar.class_b},
              {"max_per_class", cfg.cifar.max_per_class}};
    case Experiment::custom:
      return {{"train_class1", cfg.custom.train_class1},
              {"train_class2", cfg.custom.train_class2},
              {"test_class1", cfg.custom.test_class1},
              {"test_class2", cfg.custom.test_class2}};
  }
  return json::object();
}

}  // namespace

ConfigError::ConfigError(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

HypothesisPair mixture_benchmark_pair() {
  HypothesisPair h;
  h.p1 = 0.5;
  h.f1 = MixtureDensity::gaussian(0.0, 1.0);
  h.f2 = MixtureDensity{{GaussianComponent{0.6, {1.0}, {1.0}}, GaussianComponent{0.4, {-3.0}, {1.0}}}};
  return h;
}

std::vector<Violation> validate(const RunConfig& c) {
  std::vector<Violation> v;
  if (!(c.mu > 0.0) || !std::isfinite(c.mu)) v.push_back({"mu", "must be > 0"});
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) v.push_back({"lambda", "must lie in (0, 1)"});
  if (c.iterations < 1) v.push_back({"iterations", "must be >= 1"});
  if (c.eval_every < 1) v.push_back({"eval_every", "must be >= 1"});
  if (c.n_hidden < 1) v.push_back({"n_hidden", "must be >= 1"});

  try {
    check_pairing(make_phi(c.phi_name, c.rho), c.criterion);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const bool pairing = what.find("criterion") != std::string::npos;
    v.push_back({pairing ? "criterion" : (what.find("rho") != std::string::npos ? "rho" : "phi_name"), what});
  }

  switch (c.experiment) {
    case Experiment::synthetic:
      try {
        c.synthetic.pair.validate();
      } catch (const std::invalid_argument& e) {
        v.push_back({"dataset", e.what()});
      }
      if (c.synthetic.n_train_per_class < 1) v.push_back({"dataset.n_train_per_class", "must be >= 1"});
      if (c.synthetic.n_test_per_class < 1) v.push_back({"dataset.n_test_per_class", "must be >= 1"});
      break;
    case Experiment::mnist:
      if (c.mnist.class_a == c.mnist.class_b) v.push_back({"dataset.class_b", "classes must differ"});
      for (int d : {c.mnist.class_a, c.mnist.class_b})
        if (d < 0 || d > 9) v.push_back({"dataset.class_a", "digits must lie in 0..9"});
      break;
    case Experiment::cifar:
      if (c.cifar.class_a == c.cifar.class_b) v.push_back({"dataset.class_b", "classes must differ"});
      for (int d : {c.cifar.class_a, c.cifar.class_b})
        if (d < 0 || d > 9) v.push_back({"dataset.class_a", "CIFAR-10 categories lie in 0..9"});
      if (c.cifar.train_files.empty()) v.push_back({"dataset.train_files", "must not be empty"});
      if (c.cifar.test_files.empty()) v.push_back({"dataset.test_files", "must not be empty"});
      break;
    case Experiment::custom:
      for (const auto& [field, path] : {std::pair{"dataset.train_class1", &c.custom.train_class1},
                                        std::pair{"dataset.train_class2", &c.custom.train_class2},
                                        std::pair{"dataset.test_class1", &c.custom.test_class1},
                                        std::pair{"dataset.test_class2", &c.custom.test_class2}})
        if (path->empty()) v.push_back({field, "path required"});
      break;
  }
  if (c.output.dir.empty()) v.push_back({"output.dir", "must not be empty"});
  return v;
}

RunConfig parse_config(const json& j, RunConfig cfg) {
  std::vector<Violation> violations;
  Reader r(violations);
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  r.unknown_keys(j, {"name", "experiment", "mode", "criterion", "phi_name", "rho", "n_hidden", "mu", "lambda",
                     "iterations", "sampling_policy", "eval_every", "seed", "dataset", "output"});
  r.get(j, "name", cfg.name);
  r.get_enum(j, "experiment", cfg.experiment, kExperiments);
  r.get_enum(j, "mode", cfg.mode, kModes);
  r.get_enum(j, "criterion", cfg.criterion, kCriteria);
  r.get(j, "phi_name", cfg.phi_name);
  r.get(j, "rho", cfg.rho);
  r.get(j, "n_hidden", cfg.n_hidden);
  r.get(j, "mu", cfg.mu);
  r.get(j, "lambda", cfg.lambda);
  r.get(j, "iterations", cfg.iterations);
  r.get_enum(j, "sampling_policy", cfg.sampling_policy, kPolicies);
  r.get(j, "eval_every", cfg.eval_every);
  r.get(j, "seed", cfg.seed);
  if (j.contains("dataset")) {
    if (j.at("dataset").is_object())
      parse_dataset(j.at("dataset"), cfg, r);
    else
      r.fail("dataset", "must be an object");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.is_object()) {
      r.unknown_keys(o, {"dir", "evolution_csv", "report_json", "checkpoint"}, "output.");
      r.get(o, "dir", cfg.output.dir, "output.");
      r.get(o, "evolution_csv", cfg.output.evolution_csv, "output.");
      r.get(o, "report_json", cfg.output.report_json, "output.");
      r.get(o, "checkpoint", cfg.output.checkpoint, "output.");
    } else {
      r.fail("output", "must be an object");
    }
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", path.string() + ": " + e.what());
  }
  return parse_config(j, std::move(base));
}

json config_to_json(const RunConfig& c) {
  return {{"name", c.name},
          {"experiment", name_of(kExperiments, c.experiment)},
          {"mode", name_of(kModes, c.mode)},
          {"criterion", name_of(kCriteria, c.criterion)},
          {"phi_name", c.phi_name},
          {"rho", c.rho},
          {"n_hidden", c.n_hidden},
          {"mu", c.mu},
          {"lambda", c.lambda},
          {"iterations", c.iterations},
          {"sampling_policy", name_of(kPolicies, c.sampling_policy)},
          {"eval_every", c.eval_every},
          {"seed", c.seed},
          {"dataset", dataset_to_json(c)},
          {"output",
           {{"dir", c.output.dir},
            {"evolution_csv", c.output.evolution_csv},
            {"report_json", c.output.report_json},
            {"checkpoint", c.output.checkpoint}}}};
}

std::vector<std::string> preset_names() {
  return {"synthetic-cat-a", "synthetic-cat-b", "synthetic-hinge", "mnist-4v9-cat-a",
          "mnist-4v9-hinge", "cifar-cat-b",     "cifar-hinge"};
}

namespace {

struct Contender {
  const char* suffix;
  const char* phi;
  CriterionMode criterion;
  double mu;
};

std::vector<Contender> family(Experiment e) {
  switch (e) {
    case Experiment::synthetic:
      return {{"cat-a", "cat_a_default", CriterionMode::DifferenceMax, 1e-4},
              {"cat-b", "cat_b_identity", CriterionMode::DifferenceMax, 1e-4},
              {"hinge", "hinge", CriterionMode::SumMin, 1e-4}};
    case Experiment::mnist:
      return {{"cat-a", "cat_a_default", CriterionMode::DifferenceMax, 1e-4},
              {"hinge", "hinge", CriterionMode::SumMin, 1e-4}};
    case Experiment::cifar:
      return {{"cat-b", "cat_b_identity", CriterionMode::DifferenceMax, 2e-5},
              {"hinge", "hinge", CriterionMode::SumMin, 1e-5}};
    case Experiment::custom:
      return {{"cat-a", "cat_a_default", CriterionMode::DifferenceMax, 1e-4},
              {"cat-b", "cat_b_identity", CriterionMode::DifferenceMax, 1e-4},
              {"hinge", "hinge", CriterionMode::SumMin, 1e-4}};
  }
  return {};
}

const char* family_prefix(Experiment e) {
  switch (e) {
    case Experiment::synthetic: return "synthetic";
    case Experiment::mnist: return "mnist-4v9";
    case Experiment::cifar: return "cifar";
    case Experiment::custom: return "custom";
  }
  return "custom";
}

RunConfig base_for(Experiment e) {
  RunConfig c;
  c.experiment = e;
  c.mode = TrainMode::sgd;
  c.lambda = 0.99;
  c.seed = 1;
  switch (e) {
    case Experiment::synthetic:
      c.synthetic.pair = mixture_benchmark_pair();
      c.n_hidden = 100;
      c.iterations = 5000;
      c.sampling_policy = SamplingPolicy::alternating_pairs;
      c.eval_every = 10;
      break;
    case Experiment::mnist:
      c.n_hidden = 300;
      c.iterations = 500000;
      c.sampling_policy = SamplingPolicy::permuted;
      c.eval_every = 1000;
      break;
    case Experiment::cifar:
      c.n_hidden = 100;
      c.iterations = 500000;
      c.sampling_policy = SamplingPolicy::permuted;
      c.eval_every = 1000;
      break;
    case Experiment::custom:
      break;
  }
  return c;
}

RunConfig with_contender(RunConfig c, const Contender& who) {
  c.name = std::string(family_prefix(c.experiment)) + "-" + who.suffix;
  c.phi_name = who.phi;
  c.rho = 2.0;
  c.criterion = who.criterion;
  c.mu = who.mu;
  return c;
}

}  // namespace

RunConfig preset(const std::string& name) {
  for (Experiment e : {Experiment::synthetic, Experiment::mnist, Experiment::cifar})
    for (const auto& who : family(e)) {
      RunConfig c = with_contender(base_for(e), who);
      if (c.name == name) {
        c.output.dir = "lrtnet-out/" + name;
        return c;
      }
    }
  std::string known;
  for (const auto& n : preset_names()) known += " " + n;
  throw ConfigError("--preset", "unknown preset '" + name + "'; known:" + known);
}

std::vector<RunConfig> compare_variants(const RunConfig& base) {
  std::vector<RunConfig> out;
  for (const auto& who : family(base.experiment)) {
    RunConfig c = with_contender(base, who);
    c.output.dir = base.output.dir + "/" + who.suffix;
    out.push_back(std::move(c));
  }
  return out;
}

TrainRun to_train_run(const RunConfig& c) {
  TrainRun run;
  run.mode = c.mode;
  run.criterion = c.criterion;
  run.phi = make_phi(c.phi_name, c.rho);
  run.n_hidden = c.n_hidden;
  run.mu = c.mu;
  run.lambda = c.lambda;
  run.iterations = c.iterations;
  run.policy = c.sampling_policy;
  run.eval_every = c.eval_every;
  run.seed = c.seed;
  return run;
}

}  // namespace lrtnet
