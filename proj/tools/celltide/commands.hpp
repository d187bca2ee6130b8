#pragma once

#include "config.hpp"

namespace celltide::cli {

/// Subcommand bodies. Each returns a process exit code; 0 means every
/// output file was written. Diagnostics go to stderr, data only to files,
/// and files are written atomically (temp-then-rename).
int cmd_ingest(const RunConfig& config);
int cmd_fit_temporal(const RunConfig& config);
int cmd_fit_spatial(const RunConfig& config);
int cmd_hotspots(const RunConfig& config);
int cmd_generate(const RunConfig& config);
int cmd_pipeline(const RunConfig& config);

} // namespace celltide::cli
