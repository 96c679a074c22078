#pragma once

#include <string>

#include "reclink/config.hpp"

namespace reclink {

// Subcommand drivers. Each loads its inputs fully before writing any
// output, writes reports plus a run_summary.json into cfg.output_dir,
// and returns the process exit code: 0 on success, 2 when row-level
// errors exceeded cfg.max_row_errors (outputs still written). Fatal
// problems (IO, config) throw FatalError; the CLI maps those to 1.
int cmd_normalize(const RunConfig& cfg);
int cmd_profile(const RunConfig& cfg);
int cmd_link(const RunConfig& cfg);
int cmd_synth(const SynthConfig& cfg, const std::string& output_dir);
int cmd_merge(const RunConfig& cfg, const std::string& existing_path,
              const std::string& update_path);

}  // namespace reclink
