#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sigcomb::cli {

struct SweepRow {
    std::string config_id;
    std::int64_t n_samples = 0;
    int n_features = 0;
    double r1 = 0.5;
    std::string method;
    std::optional<double> precision;
    double recall = 0.0;
    double runtime_seconds = 0.0;
    double num_testable = 0.0;
};

/// One TSV row per (configuration, method); throws on an empty sweep.
std::string emit_plot_data(const std::vector<SweepRow>& rows);

/// Entry point for the command-line driver; args excludes the program name.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
int run(const std::vector<std::string>& args);

}  // namespace sigcomb::cli
