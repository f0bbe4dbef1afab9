#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "sigcomb/dataset.hpp"

namespace sigcomb::synth {

/// Generator identifier recorded in output metadata; bit-reproducible given
/// (generator name, seed).
inline constexpr std::string_view kRngName = "mt19937_64/um53/box-muller";

struct SynthSpec {
    std::int64_t n_samples = 0;
    int n_features = 0;
    double r1 = 0.5;         // minor class ratio
    double assoc_frac = 0.2; // fraction of features associated with the label
    double noise_sd = std::sqrt(0.2);
    std::uint64_t seed = 0;
};

struct SynthOutput {
    Dataset dataset;
    std::vector<int> ground_truth;  // planted feature indices, 0-based
};

/// Uniform [0,1] features; the first round(N*r1) rows get class 1; each
/// planted column is sorted in decreasing order (class-1 rows receive the
/// largest values) and then perturbed entrywise with Gaussian noise.
/// Noisy values are not clipped to [0,1].
SynthOutput generate(const SynthSpec& spec);

/// Null data: uniform features, labels assigned by row position only, no
/// planted association.
Dataset generate_null(std::int64_t n_samples, int n_features, double r1, std::uint64_t seed);

/// JSON sidecar with the spec, generator name, seed and 1-based ground truth.
void write_truth_json(const SynthSpec& spec, const SynthOutput& out, const std::filesystem::path& path);

/// Deterministic per-run seed derivation (splitmix64 of master ^ index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace sigcomb::synth
