#include "lrtnet/run.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lrtnet {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const fs::path& root, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? p : root / p;
}

Matrix load_text_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrc::io, "cannot open " + path.string());
  Matrix m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream fields(line);
    Vector row;
    double v;
    while (fields >> v) row.push_back(v);
    if (!fields.eof())
      throw DataError(DataErrc::io, path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    if (row.empty()) continue;
    if (m.rows() > 0 && row.size() != m.cols())
      throw DataError(DataErrc::count_mismatch, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                    std::to_string(m.cols()) + " columns");
    m.append_row(row);
  }
  if (m.rows() == 0) throw DataError(DataErrc::missing_class, path.string() + " holds no samples");
  return m;
}

TrainTestData synthetic_data(const RunConfig& c) {
  const auto& s = c.synthetic;
  TrainTestData d;
  d.train.provenance = d.test.provenance = Provenance::synthetic;
  d.train.class1 = sample_mixture(s.pair.f1, s.n_train_per_class, c.seed, "train_class1");
  d.train.class2 = sample_mixture(s.pair.f2, s.n_train_per_class, c.seed, "train_class2");
  d.test.class1 = sample_mixture(s.pair.f1, s.n_test_per_class, c.seed, "test_class1");
  d.test.class2 = sample_mixture(s.pair.f2, s.n_test_per_class, c.seed, "test_class2");
  return d;
}

TrainTestData mnist_data(const RunConfig& c) {
  const auto& m = c.mnist;
  const fs::path root = dataset_root(m.root);
  const auto train = load_idx(resolve(root, m.train_images), resolve(root, m.train_labels));
  const auto test = load_idx(resolve(root, m.test_images), resolve(root, m.test_labels));
  TrainTestData d;
  d.train = filter_binary(train.labels, m.class_a, m.class_b, train.images, {m.max_per_class}, Provenance::mnist);
  d.test = filter_binary(test.labels, m.class_a, m.class_b, test.images, {}, Provenance::mnist);
  return d;
}

TrainTestData cifar_data(const RunConfig& c) {
  const auto& cf = c.cifar;
  const fs::path root = dataset_root(cf.root);
  auto paths = [&root](const std::vector<std::string>& files) {
    std::vector<fs::path> out;
    for (const auto& f : files) out.push_back(resolve(root, f));
    return out;
  };
  const auto train_paths = paths(cf.train_files);
  const auto test_paths = paths(cf.test_files);
  const auto train = load_cifar_binary(train_paths);
  const auto test = load_cifar_binary(test_paths);

  // Statistics come from every training image, all ten classes, before the
  // pair is selected; the test split only receives the transform.
  const Matrix train_gray = to_grayscale(train.images);
  const auto standardizer = Standardizer::fit(train_gray);

  TrainTestData d;
  d.train = filter_binary(train.labels, cf.class_a, cf.class_b, standardizer.apply(train_gray), {cf.max_per_class},
                          Provenance::cifar);
  d.test = filter_binary(test.labels, cf.class_a, cf.class_b, standardizer.apply(to_grayscale(test.images)), {},
                         Provenance::cifar);
  return d;
}

TrainTestData custom_data(const RunConfig& c) {
  TrainTestData d;
  d.train.class1 = load_text_matrix(c.custom.train_class1);
  d.train.class2 = load_text_matrix(c.custom.train_class2);
  d.test.class1 = load_text_matrix(c.custom.test_class1);
  d.test.class2 = load_text_matrix(c.custom.test_class2);
  if (d.train.k() != d.train.class2.cols() || d.test.class1.cols() != d.train.k() ||
      d.test.class2.cols() != d.train.k())
    throw DataError(DataErrc::count_mismatch, "custom dataset files disagree on the input dimension");
  return d;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

fs::path dataset_root(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("LRTNET_DATA_DIR"); env && *env) return env;
  return ".";
}

TrainTestData load_datasets(const RunConfig& config) {
  switch (config.experiment) {
    case Experiment::synthetic: return synthetic_data(config);
    case Experiment::mnist: return mnist_data(config);
    case Experiment::cifar: return cifar_data(config);
    case Experiment::custom: return custom_data(config);
  }
  throw std::logic_error("unhandled experiment kind");
}

RunSummary run_experiment(const RunConfig& config, const fs::path& out_dir, std::ostream* progress) {
  const TrainRun run = to_train_run(config);
  const TrainTestData data = load_datasets(config);

  SnapshotCallback report;
  if (progress) {
    // Every tenth snapshot, plus the last.
    report = [progress, &config](const Snapshot& s) {
      if (s.iteration % (config.eval_every * 10) != 0 && s.iteration != config.iterations) return;
      *progress << config.name << " iter " << s.iteration << "  err1 " << s.err1 << "  err2 " << s.err2 << "  avg "
                << s.avg << "  J " << s.j_hat << '\n';
    };
  }
  TrainResult trained = train(run, data.train, data.test, std::nullopt, report);

  RunSummary summary;
  summary.final_report = evaluate(trained.state.params, run.phi, run.criterion, data.test);
  summary.log = std::move(trained.log);

  fs::create_directories(out_dir);
  export_evolution_csv(summary.log, out_dir / config.output.evolution_csv);
  export_report_json(summary.final_report, out_dir / config.output.report_json);
  save_checkpoint(trained.state.params, out_dir / config.output.checkpoint);
  write_json(out_dir / "config.json", config_to_json(config));

  if (config.experiment == Experiment::synthetic) {
    const auto& pair = config.synthetic.pair;
    nlohmann::json oracle;
    const auto mc = lrt_errors_montecarlo(pair, config.synthetic.n_test_per_class, config.seed);
    oracle["montecarlo"] = {{"err1", mc.err1}, {"err2", mc.err2}, {"avg", mc.avg}, {"weighted", mc.weighted}};
    if (pair.f1.dim() == 1) {
      const auto exact = lrt_errors_quadrature(pair);
      oracle["quadrature"] = {
          {"err1", exact.err1}, {"err2", exact.err2}, {"avg", exact.avg}, {"weighted", exact.weighted}};
      oracle["criterion_upper_bound"] = criterion_upper_bound(pair);
      summary.lrt = exact;
    } else {
      summary.lrt = mc;
    }
    write_json(out_dir / "oracle.json", oracle);
  }
  return summary;
}

int run_command(const RunConfig& config, bool compare, std::ostream& out, std::ostream& err) {
  std::vector<RunConfig> jobs = compare ? compare_variants(config) : std::vector<RunConfig>{config};
  for (const auto& job : jobs) {
    if (const auto violations = validate(job); !violations.empty()) {
      err << "config '" << job.name << "' is invalid:\n";
      for (const auto& v : violations) err << "  " << v.field << ": " << v.message << '\n';
      return kExitConfig;
    }
  }
  try {
    for (const auto& job : jobs) {
      const auto summary = run_experiment(job, job.output.dir, &out);
      const auto& r = summary.final_report;
      out << job.name << " final: err1 " << r.err1 << "  err2 " << r.err2 << "  avg " << r.avg << "  (n1 " << r.n1
          << ", n2 " << r.n2 << ")\n";
      if (summary.lrt)
        out << job.name << " LRT:   err1 " << summary.lrt->err1 << "  err2 " << summary.lrt->err2 << "  avg "
            << summary.lrt->avg << '\n';
      out << "artifacts in " << job.output.dir << '\n';
    }
  } catch (const DataError& e) {
    err << "data error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitData;
  } catch (const DivergenceError& e) {
    err << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace lrtnet
