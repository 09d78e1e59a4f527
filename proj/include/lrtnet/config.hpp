#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lrtnet/data.hpp"
#include "lrtnet/eval.hpp"
#include "lrtnet/oracle.hpp"
#include "lrtnet/trainer.hpp"

namespace lrtnet {

enum class Experiment { synthetic, mnist, cifar, custom };

struct SyntheticDataset {
  HypothesisPair pair;
  std::size_t n_train_per_class = 5000;
  std::size_t n_test_per_class = 100000;
};

struct MnistDataset {
  std::string root;  // empty: $LRTNET_DATA_DIR
  std::string train_images = "train-images-idx3-ubyte";
  std::string train_labels = "train-labels-idx1-ubyte";
  std::string test_images = "t10k-images-idx3-ubyte";
  std::string test_labels = "t10k-labels-idx1-ubyte";
  int class_a = 4;
  int class_b = 9;
  std::size_t max_per_class = 5500;  // training cap; the test split is used whole
};

struct CifarDataset {
  std::string root;  // empty: $LRTNET_DATA_DIR
  std::vector<std::string> train_files = {"data_batch_1.bin", "data_batch_2.bin", "data_batch_3.bin",
                                          "data_batch_4.bin", "data_batch_5.bin"};
  std::vector<std::string> test_files = {"test_batch.bin"};
  int class_a = 1;  // automobile
  int class_b = 0;  // airplane
  std::size_t max_per_class = 0;
};

// Whitespace/comma separated numeric rows, one sample per line.
struct CustomDataset {
  std::string train_class1;
  std::string train_class2;
  std::string test_class1;
  std::string test_class2;
};

struct OutputPaths {
  std::string dir = "lrtnet-out";
  std::string evolution_csv = "evolution.csv";
  std::string report_json = "report.json";
  std::string checkpoint = "params.bin";
};

struct RunConfig {
  std::string name = "custom";
  Experiment experiment = Experiment::synthetic;
  TrainMode mode = TrainMode::sgd;
  CriterionMode criterion = CriterionMode::DifferenceMax;
  std::string phi_name = "cat_a_default";
  double rho = 2.0;
  std::size_t n_hidden = 100;
  double mu = 1e-4;
  double lambda = 0.99;
  std::uint64_t iterations = 5000;
  SamplingPolicy sampling_policy = SamplingPolicy::alternating_pairs;
  std::uint64_t eval_every = 10;
  std::uint64_t seed = 1;
  SyntheticDataset synthetic;
  MnistDataset mnist;
  CifarDataset cifar;
  CustomDataset custom;
  OutputPaths output;
};

struct Violation {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations);
  ConfigError(std::string field, std::string message)
      : ConfigError(std::vector<Violation>{{std::move(field), std::move(message)}}) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Range and pairing checks. An empty result means the config is runnable.
std::vector<Violation> validate(const RunConfig& config);

// Keys absent from `j` keep the values already in `base`. Malformed keys are
// reported together as a ConfigError.
RunConfig parse_config(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);

// The configurations of a shared-initialization comparison: the base config
// with phi, criterion and learning rate swapped for each contender of its
// experiment family.
std::vector<RunConfig> compare_variants(const RunConfig& base);

// The 0.5 N(0,1) vs 0.5 (0.6 N(1,1) + 0.4 N(-3,1)) pair of the synthetic presets.
HypothesisPair mixture_benchmark_pair();

TrainRun to_train_run(const RunConfig& config);

}  // namespace lrtnet
