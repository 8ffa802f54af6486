#pragma once

#include "fasthcs/pipeline.hpp"
#include "fasthcs/simharness.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace fasthcs::io {

/// Everything `fasthcs fit` records about a fitted model.
struct ModelFile {
  PcaModel model;
  Index n = 0;
  Index h = 0;
  Criterion criterion;
  bool chose_pp = false;
  std::optional<IndexSet> exact_fit;
  double i_value = 0.0;
  std::uint64_t seed = 0;
};

ModelFile model_file_from_fit(const FitResult& fit, Index n, std::uint64_t seed);

/// JSON with explicit shape fields; loadings are column-major, one inner
/// array per component. Output is a pure function of the input.
std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);

/// Simulation grid in JSON. Every key is optional; unknown keys are
/// rejected. Scalars are accepted wherever a list is expected.
sim::ExperimentGrid grid_from_json(const std::string& text);
std::string grid_to_json(const sim::ExperimentGrid& grid);

struct OutputFile {
  std::string name;
  std::string checksum;  // FNV-1a 64, hex
};

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<Index> q;
  std::optional<std::uint64_t> seed;
  std::optional<double> e_over_n;
  std::optional<Index> directions;
  std::optional<Index> growing_steps;
  std::optional<Index> pp_directions;
  std::string output_dir;
  std::vector<OutputFile> files;
};

std::string fnv1a64_hex(const std::string& bytes);
std::string manifest_to_json(const RunManifest& manifest);

}  // namespace fasthcs::io
