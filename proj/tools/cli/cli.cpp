#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/parallel.hpp"

#ifndef ZLAB_VERSION
#define ZLAB_VERSION "0.0.0"
#endif

namespace zlab {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* status_name(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitAssertion: return "assertion_failed";
    case kExitInvalid: return "invalid_argument";
    case kExitNumerical: return "numerical_guard";
    default: return "error";
  }
}

struct Flags {
  std::string config;
  std::string out = "zlab-run";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  RunOptions run;
};

int run(const std::string& command, const Flags& flags, std::ostream& out, std::ostream& err) {
  const fs::path dir = flags.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "zlab: cannot create output directory '" << dir.string() << "'\n";
    return kExitInvalid;
  }
  Manifest manifest(dir);
  auto& doc = manifest.doc();
  doc["command"] = command;
  doc["version"] = ZLAB_VERSION;
  doc["started_at"] = utc_now();
  doc["threads"] = flags.threads;
  doc["exploratory"] = flags.run.exploratory;
  doc["strict_zero_mode"] = flags.run.strict_zero_mode;
  const auto t0 = std::chrono::steady_clock::now();

  int code = kExitOk;
  try {
    RunConfig config = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    if (flags.seed) config.seed = *flags.seed;
    doc["config"] = config_entries(config);
    zakharov::set_max_threads(flags.threads);
    code = run_command(command, config, flags.run, manifest) ? kExitOk : kExitAssertion;
  } catch (const zakharov::InvalidArgument& e) {
    doc["error"] = e.what();
    code = kExitInvalid;
  } catch (const zakharov::NumericalGuard& e) {
    doc["error"] = e.what();
    code = kExitNumerical;
  } catch (const std::exception& e) {
    doc["error"] = e.what();
    code = kExitError;
  }

  doc["finished_at"] = utc_now();
  doc["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc["exit_code"] = code;
  doc["status"] = status_name(code);
  try {
    manifest.write();
  } catch (const std::exception& e) {
    err << "zlab: " << e.what() << '\n';
    if (code == kExitOk) code = kExitError;
  }

  for (const auto& c : doc["checks"])
    out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << '\n';
  if (doc.contains("error")) err << "zlab " << command << ": " << doc["error"].get<std::string>() << '\n';
  out << command << ": " << status_name(code) << " (" << (dir / kManifestName).string() << ")\n";
  return code;
}

}  // namespace

int zlab_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for the Zakharov system on the torus", "zlab"};
  app.set_version_flag("--version", ZLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config, "Run configuration (key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", flags.out, "Output directory")->capture_default_str();
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { flags.seed = s; },
                                         "Override the configured seed");
  app.add_option("--threads", flags.threads, "Worker cap (0: all cores, 1: bit-reproducible)");
  app.add_flag("--exploratory", flags.run.exploratory, "Allow estimates outside their regions");
  app.add_flag("--strict-zero-mode", flags.run.strict_zero_mode,
               "Reject a nonzero mean where D^-1 is applied instead of dropping it");

  static const std::map<std::string, std::string> about = {
      {"simulate", "Reference solve; mass and Hamiltonian drift"},
      {"picard", "Normal-form Picard iteration against a reference solve"},
      {"residual", "Residual of the normal-form identities along a reference trajectory"},
      {"verify-estimates", "Sup ratios of the registered estimates at (s, l)"},
      {"scan-region", "Dyadic growth exponents over an (s, l) grid for one estimate"},
      {"denominator-scan", "Per-shell minima of the resonance denominators"},
      {"norms", "Norms of the initial data and its free flow"},
      {"contraction", "Lipschitz factors of the Picard map on random pairs"},
  };
  std::string chosen;
  for (const auto& name : command_names()) {
    const auto it = about.find(name);
    auto* sub = app.add_subcommand(name, it == about.end() ? name : it->second);
    sub->callback([&chosen, name] { chosen = name; });
  }
  std::string report_dir;
  auto* rep = app.add_subcommand("report", "Summarize a run directory");
  rep->add_option("dir", report_dir, "Run directory")->required();
  rep->callback([&chosen] { chosen = "report"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (chosen == "report") {
    try {
      out << report(report_dir);
      return kExitOk;
    } catch (const std::exception& e) {
      err << "zlab report: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  return run(chosen, flags, out, err);
}

}  // namespace zlab
