#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lrtnet/config.hpp"
#include "lrtnet/data.hpp"

namespace lrtnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitDivergence = 4,
};

struct TrainTestData {
  LabeledDataset train;
  LabeledDataset test;
};

// Directory for relative dataset paths: the config's root, else $LRTNET_DATA_DIR, else ".".
std::filesystem::path dataset_root(const std::string& configured);

// Builds training and test sets for any experiment kind. Throws DataError.
TrainTestData load_datasets(const RunConfig& config);

struct RunSummary {
  EvalReport final_report;
  EvolutionLog log;
  std::optional<ErrorRates> lrt;  // synthetic experiments only
};

// Trains one configuration and writes its artifacts into `out_dir`:
// evolution CSV, final report JSON, parameter checkpoint, the resolved
// config, and for synthetic data the LRT oracle's errors.
RunSummary run_experiment(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream* progress);

// CLI-level wrapper: validation, optional comparison, exit codes.
int run_command(const RunConfig& config, bool compare, std::ostream& out, std::ostream& err);

}  // namespace lrtnet
