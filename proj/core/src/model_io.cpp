#include "fasthcs/model_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>

namespace fasthcs::io {

using nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "fasthcs-model";
constexpr int kVersion = 1;

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json indices_json(const IndexSet& s) {
  ordered_json out = ordered_json::array();
  for (Index i : s) out.push_back(i);
  return out;
}

template <typename J>
const J& require(const J& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("model file lacks '") + key + "'");
  return j.at(key);
}

Vector vector_from(const ordered_json& j, Index expected, const char* what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != expected) {
    throw InputError(std::string("model field '") + what + "' has the wrong length");
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

IndexSet indices_from(const ordered_json& j, Index n, const char* what) {
  if (!j.is_array()) throw InputError(std::string("model field '") + what + "' is not a list");
  IndexSet out;
  for (const auto& e : j) {
    const auto i = e.get<Index>();
    if (i < 0 || i >= n || (!out.empty() && i <= out.back())) {
      throw InputError(std::string("model field '") + what +
                       "' must hold increasing row indices below n");
    }
    out.push_back(i);
  }
  return out;
}

template <typename T>
std::vector<T> list_of(const ordered_json& j) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(e.get<T>());
  } else {
    out.push_back(j.get<T>());
  }
  return out;
}

std::vector<std::string> string_list(const ordered_json& j) {
  return list_of<std::string>(j);
}

}  // namespace

ModelFile model_file_from_fit(const FitResult& fit, Index n, std::uint64_t seed) {
  ModelFile out;
  out.model = fit.model();
  out.n = n;
  out.h = fit.h;
  out.criterion = fit.selection.d;
  out.chose_pp = fit.selection.chose_pp;
  out.exact_fit = fit.selection.exact_fit;
  out.i_value = fit.iindex.i_value;
  out.seed = seed;
  return out;
}

std::string model_to_json(const ModelFile& m) {
  ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["n"] = m.n;
  j["p"] = m.model.dim();
  j["q"] = m.model.q();
  j["h"] = m.h;
  j["method"] = std::string(to_string(m.model.method));
  j["center"] = vector_json(m.model.center);
  j["eigenvalues"] = vector_json(m.model.eigenvalues);
  ordered_json loadings = ordered_json::array();
  for (Index c = 0; c < m.model.q(); ++c) loadings.push_back(vector_json(m.model.loadings.col(c)));
  j["loadings"] = std::move(loadings);
  j["subset"] = indices_json(m.model.subset);
  j["selection"] = {{"d", m.criterion.to_string()},
                    {"chose_pp", m.chose_pp},
                    {"variance_guard", m.criterion.variance_guard}};
  j["i_index"] = m.i_value;
  j["exact_fit"] = m.exact_fit ? indices_json(*m.exact_fit) : ordered_json(nullptr);
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (require(j, "format").get<std::string>() != kFormat) {
      throw InputError("not a fasthcs model file");
    }
    if (require(j, "version").get<int>() != kVersion) {
      throw InputError("unsupported model file version");
    }
    ModelFile m;
    m.n = require(j, "n").get<Index>();
    const auto p = require(j, "p").get<Index>();
    const auto q = require(j, "q").get<Index>();
    if (m.n < 1 || p < 1 || q < 1 || q > p) throw InputError("model file has invalid shape");
    m.h = require(j, "h").get<Index>();
    m.model.method = fit_method_from_string(require(j, "method").get<std::string>());
    m.model.center = vector_from(require(j, "center"), p, "center");
    m.model.eigenvalues = vector_from(require(j, "eigenvalues"), q, "eigenvalues");
    const auto& load = require(j, "loadings");
    if (!load.is_array() || static_cast<Index>(load.size()) != q) {
      throw InputError("model field 'loadings' must hold q columns");
    }
    m.model.loadings.resize(p, q);
    for (Index c = 0; c < q; ++c) {
      m.model.loadings.col(c) = vector_from(load.at(static_cast<std::size_t>(c)), p, "loadings");
    }
    m.model.subset = indices_from(require(j, "subset"), m.n, "subset");
    const auto& sel = require(j, "selection");
    m.criterion = Criterion::parse(require(sel, "d").get<std::string>());
    m.criterion.variance_guard = require(sel, "variance_guard").get<bool>();
    m.chose_pp = require(sel, "chose_pp").get<bool>();
    m.i_value = require(j, "i_index").get<double>();
    const auto& ef = require(j, "exact_fit");
    if (!ef.is_null()) m.exact_fit = indices_from(ef, m.n, "exact_fit");
    m.seed = require(j, "seed").get<std::uint64_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

sim::ExperimentGrid grid_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "n", "p", "q", "epsilon", "nu", "configs", "replicates", "methods", "seed",
      "threads", "clean_fraction", "K", "W", "pp_directions"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  sim::ExperimentGrid g;
  try {
    if (j.contains("n")) g.n = j["n"].get<Index>();
    if (j.contains("p")) g.p = list_of<Index>(j["p"]);
    if (j.contains("q")) g.q = list_of<Index>(j["q"]);
    if (j.contains("epsilon")) g.epsilon = list_of<double>(j["epsilon"]);
    if (j.contains("nu")) g.nu = list_of<double>(j["nu"]);
    if (j.contains("configs")) {
      g.configs.clear();
      for (const auto& s : string_list(j["configs"])) {
        g.configs.push_back(sim::contamination_from_string(s));
      }
    }
    if (j.contains("methods")) {
      g.methods.clear();
      for (const auto& s : string_list(j["methods"])) {
        g.methods.push_back(sim::method_from_string(s));
      }
    }
    if (j.contains("replicates")) g.replicates = j["replicates"].get<Index>();
    if (j.contains("seed")) g.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) g.threads = j["threads"].get<unsigned>();
    if (j.contains("clean_fraction")) g.clean_fraction = j["clean_fraction"].get<double>();
    if (j.contains("K")) g.directions = j["K"].get<Index>();
    if (j.contains("W")) g.growing_steps = j["W"].get<Index>();
    if (j.contains("pp_directions")) g.pp_directions = j["pp_directions"].get<Index>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  g.validate();
  return g;
}

std::string grid_to_json(const sim::ExperimentGrid& g) {
  ordered_json j;
  j["n"] = g.n;
  j["p"] = g.p;
  j["q"] = g.q;
  j["epsilon"] = g.epsilon;
  j["nu"] = g.nu;
  ordered_json configs = ordered_json::array();
  for (auto c : g.configs) configs.push_back(std::string(sim::to_string(c)));
  j["configs"] = std::move(configs);
  j["replicates"] = g.replicates;
  ordered_json methods = ordered_json::array();
  for (auto m : g.methods) methods.push_back(std::string(sim::to_string(m)));
  j["methods"] = std::move(methods);
  j["seed"] = g.seed;
  j["threads"] = g.threads;
  j["clean_fraction"] = g.clean_fraction;
  j["K"] = g.directions;
  j["W"] = g.growing_steps;
  j["pp_directions"] = g.pp_directions;
  return j.dump(2) + "\n";
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  if (m.q) j["q"] = *m.q;
  if (m.seed) j["seed"] = *m.seed;
  if (m.e_over_n) j["e_over_n"] = *m.e_over_n;
  if (m.directions) j["K"] = *m.directions;
  if (m.growing_steps) j["W"] = *m.growing_steps;
  if (m.pp_directions) j["n_directions"] = *m.pp_directions;
  j["output_dir"] = m.output_dir;
  ordered_json files = ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"fnv1a64", f.checksum}});
  j["files"] = std::move(files);
  return j.dump(2) + "\n";
}

}  // namespace fasthcs::io
