#include "fasthcs_cli/commands.hpp"

#include "fasthcs/csv.hpp"
#include "fasthcs/model_io.hpp"
#include "fasthcs/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <ostream>

namespace fs = std::filesystem;

namespace fasthcs::cli {

namespace {

struct FitArgs {
  std::string input;
  std::string out;
  Index q = 0;
  std::uint64_t seed = 1;
  double clean_fraction = 0.0;
  Index directions = 25;
  Index growing_steps = 5;
  Index pp_directions = 1000;
  unsigned threads = 1;
  bool header = false;
  bool no_header = false;
};

struct DiagnoseArgs {
  std::string input;
  std::string model;
  std::string out;
  unsigned threads = 1;
  bool fail_on_outliers = false;
  bool header = false;
  bool no_header = false;
};

struct SimulateArgs {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool no_svg = false;
};

struct GenerateArgs {
  sim::ContaminationSpec spec;
  std::string config = "shift";
  std::string out;
};

io::HeaderMode header_mode(bool header, bool no_header) {
  if (header && no_header) throw InputError("--header and --no-header are exclusive");
  if (header) return io::HeaderMode::Present;
  if (no_header) return io::HeaderMode::Absent;
  return io::HeaderMode::Auto;
}

/// Collects output files so the manifest can list their checksums.
class OutputDir {
public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    io::write_file_atomic(dir_ / name, content);
    files_.push_back({name, io::fnv1a64_hex(content)});
  }

  void finish(io::RunManifest manifest) {
    manifest.output_dir = dir_.string();
    manifest.files = files_;
    io::write_file_atomic(dir_ / "manifest.json", io::manifest_to_json(manifest));
  }

private:
  fs::path dir_;
  std::vector<io::OutputFile> files_;
};

DataMatrix load_data(const std::string& path, io::HeaderMode mode) {
  DataMatrix data;
  data.values = io::read_csv_matrix(path, mode).values;
  data.validate();
  return data;
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  const DataMatrix data = load_data(a.input, header_mode(a.header, a.no_header));
  const Index n = data.rows();
  if (a.q < 2) throw InputError("q must be at least 2");
  if (n <= a.q + 1) {
    throw InputError("need more than q + 1 rows: n = " + std::to_string(n) +
                     ", q = " + std::to_string(a.q));
  }
  if (a.q * 5 >= n) {
    err << "warning: q = " << a.q << " is not below n/5 = " << static_cast<double>(n) / 5.0
        << "; the fit may be unstable\n";
  }

  FitOptions opt;
  opt.q = a.q;
  opt.seed = a.seed;
  opt.directions = a.directions;
  opt.growing_steps = a.growing_steps;
  opt.pp_directions = a.pp_directions;
  opt.threads = a.threads;
  const Index h = subset_size_h(n, a.q);
  Index e = h;
  if (a.clean_fraction > 0.0) {
    if (!(a.clean_fraction < 1.0)) throw InputError("--clean-fraction must lie in (0, 1)");
    e = static_cast<Index>(std::llround(a.clean_fraction * static_cast<double>(n)));
    opt.clean_count = e;
  }

  const FitResult fit = fit_fasthcs(data, opt);
  const io::ModelFile model = io::model_file_from_fit(fit, n, a.seed);

  OutputDir dir(a.out);
  dir.write("model.json", io::model_to_json(model));
  std::string subset = "index\n";
  for (Index i : fit.model().subset) subset += std::to_string(i) + "\n";
  dir.write("subset.csv", subset);

  io::RunManifest manifest;
  manifest.command = "fit";
  manifest.inputs = {a.input};
  manifest.q = a.q;
  manifest.seed = a.seed;
  manifest.e_over_n = static_cast<double>(e) / static_cast<double>(n);
  manifest.directions = a.directions;
  manifest.growing_steps = a.growing_steps;
  manifest.pp_directions = a.pp_directions;
  dir.finish(manifest);

  out << "fit: n=" << n << " p=" << data.cols() << " q=" << a.q << " h=" << fit.h
      << " method=" << to_string(fit.model().method) << " D=" << fit.selection.d.to_string()
      << "\n";
  if (fit.selection.exact_fit) {
    out << "exact fit: " << fit.selection.exact_fit->size() << " rows on a "
        << a.q << "-dimensional subspace\n";
  }
  return kSuccess;
}

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out, std::ostream&) {
  const DataMatrix data = load_data(a.input, header_mode(a.header, a.no_header));
  const io::ModelFile model = io::model_from_json(io::read_text(a.model));
  if (data.cols() != model.model.dim()) {
    throw InputError("model has p = " + std::to_string(model.model.dim()) +
                     " but the data have " + std::to_string(data.cols()) + " columns");
  }
  if (data.rows() != model.n) {
    throw InputError("model was fitted on n = " + std::to_string(model.n) +
                     " rows but the data have " + std::to_string(data.rows()));
  }

  const DiagnosticReport report = diagnose(data, model.model, std::nullopt, a.threads);

  OutputDir dir(a.out);
  dir.write("report.csv", io::report_to_csv(report));
  dir.write("diagnostic.svg", io::diagnostic_svg(report));
  io::RunManifest manifest;
  manifest.command = "diagnose";
  manifest.inputs = {a.input, a.model};
  manifest.q = model.model.q();
  manifest.seed = model.seed;
  dir.finish(manifest);

  const Index flagged = report.outlier_count();
  out << "diagnose: " << flagged << " of " << data.rows() << " rows flagged (od cutoff "
      << io::format_double(report.od_cutoff) << ", sd cutoff "
      << io::format_double(report.sd_cutoff) << ")\n";
  return (a.fail_on_outliers && flagged > 0) ? kOutliersFound : kSuccess;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
  sim::ExperimentGrid grid = io::grid_from_json(io::read_text(a.config));
  if (a.threads > 0) grid.threads = a.threads;

  const auto result = sim::run_experiment(
      grid, [&out](std::size_t done, std::size_t total, const sim::ContaminationSpec& c) {
        out << "cell " << done << "/" << total << " done: p=" << c.p << " q=" << c.q
            << " epsilon=" << c.epsilon << " nu=" << c.nu << " " << sim::to_string(c.config)
            << "\n"
            << std::flush;
      });

  OutputDir dir(a.out);
  dir.write("summary.csv", io::summary_to_csv(result.summary));
  dir.write("records.csv", io::records_to_csv(result.records));
  if (!a.no_svg) dir.write("bias.svg", io::bias_panels_svg(result.summary));
  io::RunManifest manifest;
  manifest.command = "simulate";
  manifest.inputs = {a.config};
  manifest.seed = grid.seed;
  manifest.e_over_n = grid.clean_fraction;
  manifest.directions = grid.directions;
  manifest.growing_steps = grid.growing_steps;
  manifest.pp_directions = grid.pp_directions;
  dir.finish(manifest);

  std::size_t failures = 0;
  for (const auto& r : result.records) failures += r.failed ? 1 : 0;
  out << "simulate: " << result.records.size() << " fits, " << failures << " failed\n";
  return kSuccess;
}

int cmd_generate(GenerateArgs a, std::ostream& out, std::ostream&) {
  a.spec.config = sim::contamination_from_string(a.config);
  a.spec.validate();
  const auto g = sim::generate(a.spec);

  OutputDir dir(a.out);
  dir.write("data.csv", io::matrix_to_csv(g.data.values));
  dir.write("labels.csv", io::labels_to_csv(g.truth.labels));
  io::RunManifest manifest;
  manifest.command = "generate";
  manifest.q = a.spec.q;
  manifest.seed = a.spec.seed;
  dir.finish(manifest);

  out << "generate: n=" << a.spec.n << " p=" << a.spec.p << " outliers="
      << a.spec.outlier_count() << " nu=" << io::format_double(g.achieved_nu) << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust principal component analysis with FastHCS"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a FastHCS model to a CSV matrix");
  fit_cmd->add_option("--input", fit.input, "n x p numeric CSV")->required();
  fit_cmd->add_option("--q", fit.q, "Number of components")->required();
  fit_cmd->add_option("--seed", fit.seed, "Random seed");
  fit_cmd->add_option("--clean-fraction", fit.clean_fraction,
                      "Presumed clean fraction e/n (default h/n)");
  fit_cmd->add_option("--K", fit.directions, "Hyperplane directions per candidate");
  fit_cmd->add_option("--W", fit.growing_steps, "Growing steps");
  fit_cmd->add_option("--pp-directions", fit.pp_directions, "Projection pursuit directions");
  fit_cmd->add_option("--threads", fit.threads, "Worker threads (0 = hardware)");
  fit_cmd->add_flag("--header", fit.header, "First row is a header");
  fit_cmd->add_flag("--no-header", fit.no_header, "First row is data");
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Distances and outlier flags for a fitted model");
  diag_cmd->add_option("--input", diag.input, "n x p numeric CSV")->required();
  diag_cmd->add_option("--model", diag.model, "model.json written by fit")->required();
  diag_cmd->add_option("--out", diag.out, "Output directory")->required();
  diag_cmd->add_option("--threads", diag.threads, "Worker threads (0 = hardware)");
  diag_cmd->add_flag("--fail-on-outliers", diag.fail_on_outliers,
                     "Exit with status 1 when any row is flagged");
  diag_cmd->add_flag("--header", diag.header, "First row is a header");
  diag_cmd->add_flag("--no-header", diag.no_header, "First row is data");

  SimulateArgs simu;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a contamination experiment grid");
  sim_cmd->add_option("--config", simu.config, "Experiment grid JSON")->required();
  sim_cmd->add_option("--out", simu.out, "Output directory")->required();
  sim_cmd->add_option("--threads", simu.threads, "Override the config's thread count");
  sim_cmd->add_flag("--no-svg", simu.no_svg, "Skip the bias panel plot");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write one contaminated data set and its labels");
  gen_cmd->add_option("--n", gen.spec.n, "Rows");
  gen_cmd->add_option("--p", gen.spec.p, "Columns");
  gen_cmd->add_option("--q", gen.spec.q, "Signal dimension");
  gen_cmd->add_option("--epsilon", gen.spec.epsilon, "Contaminated fraction");
  gen_cmd->add_option("--nu", gen.spec.nu, "Outlier distance");
  gen_cmd->add_option("--config", gen.config, "shift or point_mass");
  gen_cmd->add_option("--seed", gen.spec.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out, err);
    if (*diag_cmd) return cmd_diagnose(diag, out, err);
    if (*sim_cmd) return cmd_simulate(simu, out, err);
    if (*gen_cmd) return cmd_generate(gen, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DegenerateError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace fasthcs::cli
