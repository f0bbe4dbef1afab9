#include "sigcomb/synth.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace sigcomb::synth {

namespace {

// Uniform on [0,1) from the top 53 bits; bit-reproducible everywhere.
double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1], safe under log().
double uniform53_pos(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller with a cached spare; state is local to one column.
class NormalDraw {
public:
    explicit NormalDraw(std::mt19937_64& rng) : rng_(rng) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform53_pos(rng_);
        const double u2 = uniform53(rng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64& rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

void validate(const SynthSpec& s) {
    if (s.n_samples < 2) throw std::invalid_argument("synth: need at least 2 samples");
    if (s.n_features < 1) throw std::invalid_argument("synth: need at least 1 feature");
    if (!(s.r1 > 0.0 && s.r1 <= 0.5)) throw std::invalid_argument("synth: r1 outside (0, 1/2]");
    if (!(s.assoc_frac > 0.0 && s.assoc_frac <= 1.0))
        throw std::invalid_argument("synth: assoc_frac outside (0, 1]");
    if (s.noise_sd < 0.0) throw std::invalid_argument("synth: negative noise_sd");
}

std::vector<int> make_labels(std::int64_t n_samples, double r1) {
    const auto n1 = static_cast<std::int64_t>(std::llround(static_cast<double>(n_samples) * r1));
    if (n1 <= 0 || n1 >= n_samples)
        throw std::invalid_argument("synth: class counts degenerate for this (N, r1)");
    std::vector<int> labels(static_cast<std::size_t>(n_samples), 0);
    for (std::int64_t i = 0; i < n1; ++i) labels[static_cast<std::size_t>(i)] = 1;
    return labels;
}

std::vector<std::vector<double>> uniform_columns(std::mt19937_64& rng, std::int64_t n_samples,
                                                 int n_features) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(n_features));
    for (auto& col : cols) {
        col.resize(static_cast<std::size_t>(n_samples));
        for (auto& v : col) v = uniform53(rng);
    }
    return cols;
}

std::vector<std::string> default_names(int n_features) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n_features));
    for (int j = 0; j < n_features; ++j) names.push_back("f" + std::to_string(j + 1));
    return names;
}

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    auto columns = uniform_columns(rng, spec.n_samples, spec.n_features);
    auto labels = make_labels(spec.n_samples, spec.r1);

    const int planted =
        static_cast<int>(std::ceil(spec.assoc_frac * static_cast<double>(spec.n_features)));
    std::vector<int> truth;
    for (int j = 0; j < planted; ++j) {
        auto& col = columns[static_cast<std::size_t>(j)];
        std::sort(col.begin(), col.end(), std::greater<double>());
        NormalDraw normal(rng);
        for (auto& v : col) v += spec.noise_sd * normal();
        truth.push_back(j);
    }

    SynthOutput out;
    out.dataset = Dataset::create(std::move(columns), std::move(labels),
                                  default_names(spec.n_features));
    out.ground_truth = std::move(truth);
    return out;
}

Dataset generate_null(std::int64_t n_samples, int n_features, double r1, std::uint64_t seed) {
    SynthSpec probe;
    probe.n_samples = n_samples;
    probe.n_features = n_features;
    probe.r1 = r1;
    probe.seed = seed;
    validate(probe);
    std::mt19937_64 rng(seed);
    auto columns = uniform_columns(rng, n_samples, n_features);
    auto labels = make_labels(n_samples, r1);
    return Dataset::create(std::move(columns), std::move(labels), default_names(n_features));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master ^ (index + 1);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void write_truth_json(const SynthSpec& spec, const SynthOutput& out, const std::filesystem::path& path) {
    nlohmann::json j;
    j["generator"] = std::string(kRngName);
    j["seed"] = spec.seed;
    j["n_samples"] = spec.n_samples;
    j["n_features"] = spec.n_features;
    j["r1"] = spec.r1;
    j["assoc_frac"] = spec.assoc_frac;
    j["noise_sd"] = spec.noise_sd;
    std::vector<int> truth_1based;
    truth_1based.reserve(out.ground_truth.size());
    for (int g : out.ground_truth) truth_1based.push_back(g + 1);
    j["ground_truth"] = truth_1based;
    std::ofstream f(path);
    if (!f) throw DataError(DataErrorCode::missing_file, "cannot write file: " + path.string());
    f << j.dump(2) << '\n';
}

}  // namespace sigcomb::synth
