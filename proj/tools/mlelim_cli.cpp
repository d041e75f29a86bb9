#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlelim/discriminant.hpp"
#include "mlelim/errors.hpp"
#include "mlelim/interpolate.hpp"
#include "mlelim/models.hpp"

using namespace mlelim;
using nlohmann::ordered_json;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kModel = 2,
  kResource = 3,
  kDegenerate = 4,
  kNonPrincipal = 5,
};

struct RunConfig {
  std::string model;
  std::string model_file;
  std::string method;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::size_t gb_budget = GbOptions{}.pair_budget;
  int retries = PipelineOptions{}.retries;
  bool allow_heavy = false;
  bool scaled = false;
};

class HeavyModel : public ModelError {
 public:
  using ModelError::ModelError;
};

ModelSpec resolve_model(const RunConfig& cfg) {
  ModelSpec m = cfg.model_file.empty() ? builtin_model(cfg.model) : load_model_file(cfg.model_file);
  if (m.heavy && !cfg.allow_heavy) {
    throw HeavyModel("model '" + m.name + "' is marked heavy; pass --allow-heavy to run it anyway");
  }
  return m;
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
  PipelineOptions opts;
  opts.gb.pair_budget = cfg.gb_budget;
  opts.retries = cfg.retries;
  return opts;
}

std::string join(const std::vector<int>& xs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
  return out.str();
}

class Stopwatch {
 public:
  long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Wall-clock time goes to stderr so stdout stays byte-identical across runs.
void report_time(const Stopwatch& w) { std::cerr << "time_ms: " << w.elapsed_ms() << "\n"; }

void emit(const RunConfig& cfg, const ordered_json& doc, const std::vector<std::pair<std::string, std::string>>& text) {
  if (cfg.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : text) std::cout << k << ": " << v << "\n";
}

int cmd_equations(const RunConfig& cfg) {
  const ModelSpec m = resolve_model(cfg);
  LagrangeSystem sys = cfg.scaled ? scaled_system(m).as_system() : likelihood_system(m);
  ordered_json doc;
  doc["name"] = m.name;
  doc["seed"] = cfg.seed;
  doc["scaled"] = cfg.scaled;
  doc["parameters"] = sys.parameters;
  doc["unknowns"] = sys.unknowns;
  std::vector<std::string> eqs;
  for (const auto& e : sys.equations) eqs.push_back(e.to_string());
  doc["equations"] = eqs;
  if (cfg.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return kOk;
  }
  std::cout << "name: " << m.name << "\nseed: " << cfg.seed << "\n";
  for (std::size_t i = 0; i < eqs.size(); ++i) std::cout << (cfg.scaled ? "F" : "f") << i << ": " << eqs[i] << "\n";
  return kOk;
}

int cmd_eliminate(const RunConfig& cfg) {
  const ModelSpec m = resolve_model(cfg);
  const LagrangeSystem sys = likelihood_system(m);
  const PipelineOptions opts = pipeline_options(cfg);
  Stopwatch w;
  ordered_json doc;
  doc["name"] = m.name;
  doc["method"] = cfg.method;
  doc["seed"] = cfg.seed;
  std::vector<std::pair<std::string, std::string>> text = {
      {"name", m.name}, {"method", cfg.method}, {"seed", std::to_string(cfg.seed)}};
  if (cfg.method == "groebner") {
    MultiPoly E = eliminate_groebner(sys, opts);
    const int N = E.degree(sys.first_unknown());
    doc["N"] = N;
    doc["E_f"] = E.to_string();
    text.emplace_back("N", std::to_string(N));
    text.emplace_back("E_f", E.to_string());
  } else {
    EliminationResult r = eliminate_interpolate(sys, cfg.seed, opts);
    doc["N"] = r.profile.N;
    doc["alpha"] = r.profile.alpha;
    doc["L"] = r.profile.L;
    doc["Omega"] = r.profile.Omega;
    doc["samples_used"] = r.samples_used;
    doc["verified"] = r.verified;
    doc["reparameterized"] = r.reparameterized;
    doc["E_f"] = r.E_f.to_string();
    text.emplace_back("N", std::to_string(r.profile.N));
    text.emplace_back("alpha", join(r.profile.alpha));
    text.emplace_back("L", join(r.profile.L));
    std::string omega;
    for (std::size_t i = 0; i < r.profile.Omega.size(); ++i) omega += (i ? "; " : "") + join(r.profile.Omega[i]);
    text.emplace_back("Omega", omega);
    text.emplace_back("samples_used", std::to_string(r.samples_used));
    text.emplace_back("verified", r.verified ? "true" : "false");
    text.emplace_back("reparameterized", r.reparameterized ? "true" : "false");
    text.emplace_back("E_f", r.E_f.to_string());
  }
  report_time(w);
  emit(cfg, doc, text);
  return kOk;
}

int cmd_structure(const RunConfig& cfg) {
  const ModelSpec m = resolve_model(cfg);
  Stopwatch w;
  SampleStream rng(cfg.seed);
  StructureConstants sc = structure_constants(m, rng, pipeline_options(cfg));
  report_time(w);
  ordered_json doc;
  doc["name"] = m.name;
  doc["seed"] = cfg.seed;
  doc["N"] = sc.N;
  doc["t"] = sc.t;
  doc["l"] = sc.l;
  doc["delta"] = sc.delta;
  emit(cfg, doc,
       {{"name", m.name},
        {"seed", std::to_string(cfg.seed)},
        {"N", std::to_string(sc.N)},
        {"t", std::to_string(sc.t)},
        {"l", std::to_string(sc.l)},
        {"delta", std::to_string(sc.delta)}});
  return kOk;
}

int cmd_discriminant(const RunConfig& cfg) {
  const ModelSpec m = resolve_model(cfg);
  const LagrangeSystem sys = likelihood_system(m);
  const PipelineOptions opts = pipeline_options(cfg);
  Stopwatch w;
  EliminationResult r = eliminate_interpolate(sys, cfg.seed, opts);
  ordered_json doc;
  doc["name"] = m.name;
  doc["method"] = cfg.method;
  doc["seed"] = cfg.seed;
  std::vector<std::pair<std::string, std::string>> text = {
      {"name", m.name}, {"method", cfg.method}, {"seed", std::to_string(cfg.seed)}};
  MultiPoly d;
  if (cfg.method == "structured") {
    SampleStream rng(cfg.seed);
    StructureConstants sc = structure_constants(m, rng, opts);
    d = structured_discriminant(r.E_f, sc, sys);
    doc["s_exponent"] = sc.s_exponent();
    text.emplace_back("s_exponent", std::to_string(sc.s_exponent()));
  } else {
    d = discr_resultant(r.E_f, sys.first_unknown());
  }
  report_time(w);
  doc["discriminant"] = d.to_string();
  text.emplace_back("discriminant", d.to_string());
  emit(cfg, doc, text);
  return kOk;
}

int run(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "equations") return cmd_equations(cfg);
    if (command == "eliminate") return cmd_eliminate(cfg);
    if (command == "structure") return cmd_structure(cfg);
    return cmd_discriminant(cfg);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const UnknownVariable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const NonHomogeneousInvariant& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const Degeneracy& e) {
    std::cerr << "error: " << e.what() << " (seed " << cfg.seed << ")\n";
    return kDegenerate;
  } catch (const NonPrincipal& e) {
    std::cerr << "error: elimination ideal is not principal: " << e.what() << "\n";
    return kNonPrincipal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eliminants and discriminants of likelihood equations"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    auto* model = sub->add_option("--model", cfg.model, "Builtin model name");
    auto* file = sub->add_option("--model-file", cfg.model_file, "Model description file");
    model->excludes(file);
    file->excludes(model);
    sub->add_option("--seed", cfg.seed, "Seed of the sample stream")->envname("MLE_ELIM_SEED");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--gb-budget", cfg.gb_budget, "Pair budget for each Groebner basis");
    sub->add_option("--retries", cfg.retries, "Resamples per stage after a degenerate sample");
    sub->add_flag("--allow-heavy", cfg.allow_heavy, "Run models marked heavy");
  };

  auto* equations = app.add_subcommand("equations", "Print the likelihood equations");
  add_common(equations);
  equations->add_flag("--scaled", cfg.scaled, "Print the scaled system instead");

  auto* eliminate = app.add_subcommand("eliminate", "Compute the radical eliminant E_f");
  add_common(eliminate);
  cfg.method = "interpolate";
  eliminate->add_option("--method", cfg.method, "groebner or interpolate")
      ->check(CLI::IsMember({"groebner", "interpolate"}));

  auto* structure = app.add_subcommand("structure", "Compute N, t, l and delta");
  add_common(structure);

  auto* discriminant = app.add_subcommand("discriminant", "Compute discr(E_f; p0)");
  add_common(discriminant);
  std::string discr_method = "structured";
  discriminant->add_option("--method", discr_method, "resultant or structured")
      ->check(CLI::IsMember({"resultant", "structured"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == discriminant) cfg.method = discr_method;
  if (cfg.model.empty() && cfg.model_file.empty()) {
    std::cerr << "error: one of --model or --model-file is required\n";
    return kModel;
  }
  return run(chosen->get_name(), cfg);
}
