// Command-line driver for the polaron laboratory.
//
//   polaron-lab SUBCOMMAND [--config PATH] [--seed N] [--out DIR]
//                          [--override key=value]...
//   polaron-lab rerun --manifest PATH [--out DIR]
//
// Subcommands: spectral, recursion, mcmc, gci, decompose, oracle-check.
// Exit codes: 0 all assertions passed, 2 at least one assertion failed,
// 1 usage or configuration error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polaron/config.hpp"
#include "polaron/experiment.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct CommonArgs {
  std::string configPath;
  std::uint64_t seed = kDefaultSeed;
  std::string outDir;
  std::vector<std::string> overrides;
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_outputs(const std::string& outDir, const polaron::ExperimentResult& res,
                   const nlohmann::json& manifest) {
  namespace fs = std::filesystem;
  const fs::path dir(outDir);
  fs::create_directories(dir);
  for (const auto& [name, contents] : res.csv) write_file(dir / name, contents);
  write_file(dir / "report.json", res.report.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

int run_and_emit(const std::string& name, const polaron::Config& cfg,
                 std::uint64_t seed, const std::string& outDir,
                 const std::vector<std::string>& cmdline) {
  const auto t0 = std::chrono::steady_clock::now();
  const polaron::ExperimentResult res = polaron::run_subcommand(name, cfg, seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& line : res.lines) std::cout << line << "\n";
  if (!outDir.empty()) {
    const nlohmann::json manifest =
        polaron::make_manifest(name, cfg, seed, wall, cmdline);
    write_outputs(outDir, res, manifest);
    std::cout << "outputs written to " << outDir << "\n";
  }
  std::cout << "RESULT " << name << (res.pass ? " PASS" : " FAIL") << "\n";
  return res.pass ? 0 : 2;
}

polaron::Config load_config(const CommonArgs& args) {
  polaron::Config cfg;
  if (!args.configPath.empty()) cfg = polaron::Config::fromFile(args.configPath);
  for (const auto& ov : args.overrides) cfg.applyOverride(ov);
  return cfg;
}

std::uint64_t resolve_seed(const CommonArgs& args, bool seedOnCmdline,
                           const polaron::Config& cfg) {
  if (seedOnCmdline) return args.seed;
  if (cfg.has("seed")) return cfg.uinteger("seed", kDefaultSeed);
  return kDefaultSeed;
}

int run_rerun(const std::string& manifestPath, const std::string& outDir,
              const std::vector<std::string>& cmdline) {
  std::ifstream in(manifestPath, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open manifest " << manifestPath << "\n";
    return 1;
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid manifest JSON: " << e.what() << "\n";
    return 1;
  }
  if (manifest.value("format", 0) != 1) {
    std::cerr << "error: unsupported manifest format\n";
    return 1;
  }
  const std::string name = manifest.at("subcommand").get<std::string>();
  const auto seed = manifest.at("seed").get<std::uint64_t>();
  polaron::Config cfg;
  for (const auto& [k, v] : manifest.at("resolvedConfig").items())
    cfg.set(k, v.get<std::string>());
  return run_and_emit(name, cfg, seed, outDir, cmdline);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for confined Gaussian path measures"};
  app.require_subcommand(1);

  CommonArgs args;
  const std::vector<std::string> names = {"spectral",  "recursion", "mcmc",
                                          "gci",       "decompose", "oracle-check"};
  const std::vector<std::string> descs = {
      "Gaussian-confinement variance: series vs lattice covariance",
      "effective-mass confinement recursion and fixed-point scaling",
      "path-measure MCMC estimates of the diffusion constant",
      "correlation-inequality checks on randomized convex bodies",
      "good/bad mixture decomposition with log-concavity checks",
      "cross-checks of analytic identities against quadrature"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", args.configPath, "configuration file (INI-style)");
    sub->add_option("--seed", args.seed, "master RNG seed");
    sub->add_option("--out", args.outDir, "directory for CSV/report/manifest output");
    sub->add_option("--override", args.overrides,
                    "config override key=value (repeatable)");
    subs.push_back(sub);
  }

  std::string manifestPath;
  CLI::App* rerun = app.add_subcommand(
      "rerun", "re-run an experiment from a manifest and reproduce its outputs");
  rerun->add_option("--manifest", manifestPath, "manifest.json from a previous run")
      ->required();
  rerun->add_option("--out", args.outDir, "directory for CSV/report/manifest output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::vector<std::string> cmdline(argv, argv + argc);
  try {
    if (rerun->parsed()) return run_rerun(manifestPath, args.outDir, cmdline);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const polaron::Config cfg = load_config(args);
      const std::uint64_t seed =
          resolve_seed(args, subs[i]->count("--seed") > 0, cfg);
      return run_and_emit(names[i], cfg, seed, args.outDir, cmdline);
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
