#pragma once

#include <CLI11.hpp>

namespace etuk::cli {

// Each register_* adds a subcommand whose callback does the work. Library
// errors propagate to main, which maps them onto exit codes.
void register_infer(CLI::App& app);
void register_eval(CLI::App& app);
void register_oracle(CLI::App& app);
void register_weights(CLI::App& app);
void register_plt(CLI::App& app);
void register_synth(CLI::App& app);

}  // namespace etuk::cli
