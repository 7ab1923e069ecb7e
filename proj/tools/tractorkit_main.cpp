#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tractorkit/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitManifest = 2;
constexpr int kExitSingular = 3;

int run_command(const std::string& manifest_path, const tk::RunOverrides& overrides) {
  tk::Manifest m;
  try {
    m = tk::load_manifest(manifest_path);
    tk::apply_overrides(m, overrides);
  } catch (const tk::ParseError& e) {
    std::cerr << "tractorkit: " << e.what() << "\n";
    return kExitManifest;
  }
  tk::Report r;
  try {
    r = tk::run_manifest(m);
  } catch (const tk::EvaluationSingularity& e) {
    std::cerr << "tractorkit: evaluation singularity: " << e.what() << "\n";
    return kExitSingular;
  } catch (const tk::ParseError& e) {
    std::cerr << "tractorkit: " << e.what() << "\n";
    return kExitManifest;
  } catch (const tk::PreconditionViolation& e) {
    // Input-level conditions such as an asymmetric Gamma or a degenerate metric.
    std::cerr << "tractorkit: invalid input: " << e.what() << "\n";
    return kExitManifest;
  } catch (const tk::DimensionMismatch& e) {
    std::cerr << "tractorkit: invalid input: " << e.what() << "\n";
    return kExitManifest;
  }
  const std::string text = tk::serialize_report(r);
  if (m.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(m.output, std::ios::binary);
    if (!out) {
      std::cerr << "tractorkit: cannot write " << m.output << "\n";
      return kExitInternal;
    }
    out << text;
    std::cerr << (r.verdict ? r.verdict->classification : std::string("done")) << " -> " << m.output << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective and tractor invariants of affine connections"};
  app.require_subcommand(1);

  std::string manifest_path, out_path, ring, seed_text;
  double tol = 0.0;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Run the analyses of a manifest and write a JSON report");
  run->add_option("manifest", manifest_path, "Manifest file")->required();
  run->add_option("--out", out_path, "Report path (overrides [output] path; stdout when neither is set)");
  run->add_option("--ring", ring, "Scalar ring")->check(CLI::IsMember({"exact", "float"}));
  run->add_option("--tol", tol, "Float-path tolerance");
  run->add_option("--seed", seed_text, "Seed for the random sample points, decimal or 0x-prefixed");
  run->add_flag("--timing", timing, "Record per-analysis wall-clock seconds in the report");

  std::string report_path;
  auto* explain = app.add_subcommand("explain", "Summarise a report");
  explain->add_option("report", report_path, "Report file")->required();

  auto* list = app.add_subcommand("list-builtins", "List the builtin connections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitManifest;
  }

  try {
    if (*run) {
      tk::RunOverrides o;
      if (!ring.empty()) o.ring = ring == "exact" ? tk::Ring::Exact : tk::Ring::Float;
      if (run->count("--tol")) o.tol = tol;
      if (!seed_text.empty()) {
        try {
          std::size_t used = 0;
          o.seed = std::stoull(seed_text, &used, 0);
          if (used != seed_text.size()) throw std::invalid_argument(seed_text);
        } catch (const std::exception&) {
          std::cerr << "tractorkit: --seed needs a 64-bit integer\n";
          return kExitManifest;
        }
      }
      if (!out_path.empty()) o.output = out_path;
      o.timing = timing;
      return run_command(manifest_path, o);
    }
    if (*explain) {
      try {
        std::cout << tk::explain_report(tk::load_report(report_path));
      } catch (const tk::ParseError& e) {
        std::cerr << "tractorkit: " << e.what() << "\n";
        return kExitManifest;
      }
      return kExitOk;
    }
    if (*list) {
      for (const auto& name : tk::builtin_names()) {
        const tk::Builtin b = tk::builtin(name);
        std::cout << name << "\t" << b.description << "\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "tractorkit: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
