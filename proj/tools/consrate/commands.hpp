#pragma once

#include <functional>

#include <CLI11.hpp>

namespace consrate::cli {

struct Context {
    unsigned threads = 1;
};

/// Each add_* registers a subcommand; when it is selected, `run` is set to the
/// action that performs it and returns the exit code.
using Runner = std::function<int()>;

void add_rate(CLI::App& app, const Context& ctx, Runner& run);
void add_mincut(CLI::App& app, const Context& ctx, Runner& run);
void add_enumerate(CLI::App& app, const Context& ctx, Runner& run);
void add_simulate(CLI::App& app, const Context& ctx, Runner& run);
void add_detect(CLI::App& app, const Context& ctx, Runner& run);
void add_allocate(CLI::App& app, const Context& ctx, Runner& run);

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kCapacity = 3, kInsufficientData = 4 };

}  // namespace consrate::cli
