#pragma once

#include <ostream>

#include "dfbench/cli/config.hpp"

namespace dfbench::cli {

/// Parses `dfbench <command> [flags]` and dispatches. Returns the process
/// exit code: 0 success, 1 usage, 2 data validation, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Commands. Each writes its files under config.out_dir (created on demand)
// plus a run.log, prints a summary to `out` and warnings to `err`, and
// throws dfbench::Error on failure.

/// (feature file x classifier) grid under k-fold CV: report.csv, folds.csv,
/// and anova.csv when the grid is complete with at least 2 x 2 cells.
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One feature file, one classifier: report.csv, confusion.csv, folds.csv
/// and model.bin (trained on every selected sample).
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);

/// t-SNE of one feature file: embedding.csv and plot.svg.
int cmd_embed(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Feature-space silhouette: silhouette.csv (per class) and
/// silhouette_samples.csv (per sample).
int cmd_silhouette(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Manifest self-consistency plus a cross-check against every feature file.
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dfbench::cli
