#pragma once

#include <iosfwd>

#include "mvtl/cli/config.hpp"
#include "mvtl/cli/random_study.hpp"

namespace mvtl::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNoPlan = 2, kExitInternal = 3 };

// Each command validates its inputs, writes its artifacts under cfg.out
// atomically and prints a short summary to `out`. Failures are reported by
// exception; run_cli maps them to exit codes.

/// plan.json
int cmd_plan(const RunConfig& cfg, std::ostream& out);
/// oracle_plan.json and oracle_report.json; plans first when plan.json is absent.
int cmd_oracle(const RunConfig& cfg, std::ostream& out);
/// tasks.json from plan.json.
int cmd_decompose(const RunConfig& cfg, std::ostream& out);
/// policies/task_<i>.json, logs/task_<i>.csv and train_summary.json from tasks.json.
int cmd_train(const RunConfig& cfg, std::ostream& out);
/// metrics.json from tasks.json and the trained policies.
int cmd_eval(const RunConfig& cfg, std::ostream& out);
/// random_study.csv and random_study.json.
int cmd_random_study(const StudyParams& params, const std::filesystem::path& out_dir,
                     std::size_t jobs, std::ostream& out);
/// report/task_<i>.dat learning curves from the training logs.
int cmd_report(const RunConfig& cfg, std::ostream& out);

}  // namespace mvtl::cli
