#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace zlab {

inline constexpr const char* kManifestName = "manifest.json";

/// Run manifest: config snapshot, checks, outputs and notes of one run.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir);

  nlohmann::json& doc() { return doc_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// Records an assertion; returns pass.
  bool check(const std::string& name, bool pass, double value, double limit, const std::string& detail = {});
  bool all_passed() const;

  /// Registers an output file, relative to the run directory.
  void output(const std::string& file);
  void note(const std::string& text);

  /// Fills the output inventory from the files that exist and writes
  /// manifest.json through a temporary file and a rename.
  void write() const;

 private:
  std::filesystem::path dir_;
  nlohmann::json doc_;
};

/// Deterministic human-readable summary of a run directory. Throws
/// zakharov::InvalidArgument when the manifest is missing or malformed.
std::string report(const std::filesystem::path& dir);

}  // namespace zlab
