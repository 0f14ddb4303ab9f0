#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "manifest.hpp"

namespace zlab {

struct RunOptions {
  bool exploratory = false;
  bool strict_zero_mode = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its CSV files into manifest.dir() and its
/// results and checks into the manifest. Returns true when every check passes.
bool run_command(const std::string& command, const RunConfig& config, const RunOptions& options,
                 Manifest& manifest);

/// Estimates selected by the config's `estimate` key: "all" (every estimate
/// of the configured dimension), a family name, or a full "<family>/d<dim>" name.
std::vector<std::string> selected_estimates(const RunConfig& config);

struct InitialData {
  zakharov::SpectralField u0;
  zakharov::SpectralField n0;
  zakharov::SpectralField n1;
};

InitialData initial_data(const RunConfig& config, const zakharov::GridPtr& grid);

/// First-order data (u0, N0) in the configured nonlinearity mode.
zakharov::ZakharovState initial_state(const RunConfig& config, const RunOptions& options,
                                      const zakharov::GridPtr& grid);

}  // namespace zlab
