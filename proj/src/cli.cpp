#include "sigcomb/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigcomb/baseline.hpp"
#include "sigcomb/dataset.hpp"
#include "sigcomb/eval.hpp"
#include "sigcomb/miner.hpp"
#include "sigcomb/ranking.hpp"
#include "sigcomb/report.hpp"
#include "sigcomb/synth.hpp"
#include "sigcomb/version.hpp"

namespace sigcomb::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorCode::missing_file, "cannot write file: " + path.string());
    out << text;
    if (!out) throw DataError(DataErrorCode::missing_file, "write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorCode::missing_file, "cannot open file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(DataErrorCode::bad_format, "bad JSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

std::string format_cell(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int default_threads() {
    if (const char* env = std::getenv("SIGCOMB_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    return 1;
}

const CLI::Validator kAlphaCheck(
    [](std::string& s) -> std::string {
        try {
            const double v = std::stod(s);
            if (v > 0.0 && v < 1.0) return {};
        } catch (...) {
        }
        return "alpha must be in (0, 1)";
    },
    "ALPHA");

struct MineArgs {
    std::string input;
    std::string label_col = "label";
    std::string out;
    std::string dump_ranks;
    std::string export_binary;
    double alpha = 0.05;
    int threads = 1;
    std::size_t max_order = 0;
    std::uint64_t progress = 0;
};

void print_summary(const miner::MiningResult& res) {
    std::cout << "testable combinations:    " << res.correction_factor << "\n"
              << "corrected threshold:      "
              << (res.testable.empty() ? std::string("n/a")
                                       : format_cell(res.delta))
              << "\n"
              << "support threshold sigma:  " << res.sigma_final << "\n"
              << "significant combinations: " << res.significant.size() << "\n";
}

int cmd_mine(const MineArgs& a, bool binarized) {
    auto [canon, ratios] = canonicalize_labels(load_dataset(a.input, a.label_col));

    miner::MinerOptions opts;
    opts.alpha = a.alpha;
    opts.threads = a.threads;
    opts.max_order = a.max_order;
    opts.progress_interval = a.progress;

    report::RunMeta meta;
    meta.input = a.input;
    meta.labels_swapped = ratios.swapped;
    meta.threads = a.threads;

    miner::MiningResult res;
    std::vector<std::string> names;
    if (binarized) {
        const auto b = baseline::median_binarize(canon);
        if (!a.export_binary.empty()) baseline::save_binary_csv(b, a.export_binary);
        res = baseline::mine_binary(b, opts);
        names = b.names;
        meta.method = "binary";
    } else {
        const auto rm = ranking::rank_matrix(canon);
        if (!a.dump_ranks.empty()) {
            std::ofstream rk(a.dump_ranks);
            if (!rk) throw DataError(DataErrorCode::missing_file, "cannot write file: " + a.dump_ranks);
            ranking::write_ranks_tsv(rm, rk);
        }
        res = miner::mine_columns(rm.columns, canon.labels, miner::SupportKind::copula, opts);
        names = canon.feature_names;
        meta.method = "copula";
    }
    write_json(a.out, report::result_to_json(res, names, meta));
    print_summary(res);
    return 0;
}

struct SynthArgs {
    std::int64_t n_samples = 200;
    int n_features = 20;
    double r1 = 0.5;
    double assoc_frac = 0.2;
    double noise_sd = std::sqrt(0.2);
    std::uint64_t seed = 0;
    std::string out;
};

fs::path truth_sidecar(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension();
    p += ".truth.json";
    return p;
}

int cmd_synth(const SynthArgs& a) {
    synth::SynthSpec spec;
    spec.n_samples = a.n_samples;
    spec.n_features = a.n_features;
    spec.r1 = a.r1;
    spec.assoc_frac = a.assoc_frac;
    spec.noise_sd = a.noise_sd;
    spec.seed = a.seed;
    const auto out = synth::generate(spec);
    save_dataset(out.dataset, a.out);
    synth::write_truth_json(spec, out, truth_sidecar(a.out));
    std::cout << "wrote " << a.out << " and " << truth_sidecar(a.out).string() << "\n";
    return 0;
}

struct EvalArgs {
    std::string results;
    std::string truth;
    std::string out;
};

int cmd_eval(const EvalArgs& a) {
    const auto results = read_json(a.results);
    const auto truth_doc = read_json(a.truth);
    if (!results.contains("significant") || !truth_doc.contains("ground_truth"))
        throw DataError(DataErrorCode::bad_format, "results or truth file missing required fields");

    std::vector<std::vector<int>> significant;
    for (const auto& rec : results["significant"]) {
        std::vector<int> combo;
        for (int f : rec["features"]) combo.push_back(f - 1);
        significant.push_back(std::move(combo));
    }
    std::vector<int> truth;
    for (int f : truth_doc["ground_truth"]) truth.push_back(f - 1);
    if (results.value("method", "copula") == "binary") truth = eval::expand_binary_truth(truth);

    const auto pr = eval::precision_recall(significant, truth);
    nlohmann::json doc;
    doc["results_file"] = a.results;
    doc["truth_file"] = a.truth;
    if (pr.precision) doc["precision"] = *pr.precision;
    else doc["precision"] = nullptr;
    doc["recall_paper"] = pr.recall_paper;
    doc["recall_nonempty"] = pr.recall_nonempty;
    doc["true_positives"] = pr.true_positives;
    doc["num_significant"] = pr.num_significant;
    doc["ground_truth_size"] = pr.ground_truth_size;
    write_json(a.out, doc);
    std::cout << "precision: " << (pr.precision ? format_cell(*pr.precision) : std::string("n/a"))
              << "  recall: " << pr.recall_paper << "\n";
    return 0;
}

struct FwerArgs {
    std::int64_t n_samples = 100;
    int n_features = 15;
    double r1 = 0.5;
    double alpha = 0.05;
    int reps = 100;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

int cmd_fwer(const FwerArgs& a) {
    eval::NullSpec spec;
    spec.n_samples = a.n_samples;
    spec.n_features = a.n_features;
    spec.r1 = a.r1;
    spec.master_seed = a.seed;
    const auto res = eval::fwer_simulation(spec, a.alpha, a.reps, a.threads);
    nlohmann::json doc;
    doc["alpha"] = a.alpha;
    doc["n_samples"] = a.n_samples;
    doc["n_features"] = a.n_features;
    doc["r1"] = a.r1;
    doc["master_seed"] = a.seed;
    doc["repetitions"] = res.repetitions;
    doc["runs_with_rejections"] = res.runs_with_rejections;
    doc["fwer"] = res.fwer;
    write_json(a.out, doc);
    std::cout << "empirical FWER: " << res.fwer << " (" << res.runs_with_rejections << "/"
              << res.repetitions << " runs)\n";
    return 0;
}

struct BenchArgs {
    std::string vary = "N";
    std::vector<std::int64_t> values;
    std::int64_t n_samples = 200;
    int n_features = 20;
    double r1 = 0.5;
    double alpha = 0.05;
    double assoc_frac = 0.2;
    double noise_sd = std::sqrt(0.2);
    int seeds = 3;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    std::string json_out;  // optional per-run reports
};

int cmd_bench(const BenchArgs& a) {
    std::vector<SweepRow> rows;
    nlohmann::json runs = nlohmann::json::array();
    for (std::int64_t value : a.values) {
        synth::SynthSpec spec;
        spec.n_samples = a.vary == "N" ? value : a.n_samples;
        spec.n_features = a.vary == "n" ? static_cast<int>(value) : a.n_features;
        spec.r1 = a.r1;
        spec.assoc_frac = a.assoc_frac;
        spec.noise_sd = a.noise_sd;

        struct Agg {
            std::vector<double> precision, recall, runtime, testable;
        };
        Agg agg[2];
        for (int s = 0; s < a.seeds; ++s) {
            spec.seed = synth::derive_seed(a.seed, static_cast<std::uint64_t>(value) * 1000 +
                                                       static_cast<std::uint64_t>(s));
            const auto syn = synth::generate(spec);
            auto [canon, ratios] = canonicalize_labels(syn.dataset);
            (void)ratios;
            for (int m = 0; m < 2; ++m) {
                const auto method = m == 0 ? eval::Method::copula : eval::Method::binary;
                const auto rep = eval::benchmark(canon, syn.ground_truth, method, a.alpha, a.threads);
                if (rep.pr.precision) agg[m].precision.push_back(*rep.pr.precision);
                agg[m].recall.push_back(rep.pr.recall_paper);
                agg[m].runtime.push_back(rep.runtime_seconds);
                agg[m].testable.push_back(static_cast<double>(rep.num_testable));
                if (!a.json_out.empty()) {
                    nlohmann::json run = report::eval_report_to_json(rep);
                    run["N"] = spec.n_samples;
                    run["n"] = spec.n_features;
                    run["r1"] = spec.r1;
                    run["seed"] = spec.seed;
                    runs.push_back(std::move(run));
                }
            }
        }
        std::ostringstream cfg;
        cfg << "N" << spec.n_samples << "_n" << spec.n_features << "_r" << spec.r1;
        for (int m = 0; m < 2; ++m) {
            SweepRow row;
            row.config_id = cfg.str();
            row.n_samples = spec.n_samples;
            row.n_features = spec.n_features;
            row.r1 = spec.r1;
            row.method = m == 0 ? "copula" : "binary";
            if (!agg[m].precision.empty()) row.precision = median(agg[m].precision);
            row.recall = median(agg[m].recall);
            row.runtime_seconds = median(agg[m].runtime);
            row.num_testable = median(agg[m].testable);
            rows.push_back(std::move(row));
        }
    }
    write_text(a.out, emit_plot_data(rows));
    if (!a.json_out.empty()) write_json(a.json_out, runs);
    std::cout << "wrote " << rows.size() << " sweep rows to " << a.out << "\n";
    return 0;
}

}  // namespace

std::string emit_plot_data(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("emit_plot_data: empty sweep");
    std::ostringstream os;
    os << "config\tN\tn\tr1\tmethod\tprecision\trecall\truntime_seconds\tnum_testable\n";
    for (const auto& r : rows) {
        os << r.config_id << '\t' << r.n_samples << '\t' << r.n_features << '\t' << r.r1 << '\t'
           << r.method << '\t' << (r.precision ? format_cell(*r.precision) : std::string("na")) << '\t'
           << r.recall << '\t' << r.runtime_seconds << '\t' << r.num_testable << '\n';
    }
    return os.str();
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"sigcomb: significant feature combination mining on continuous data"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    const int env_threads = default_threads();
    MineArgs mine_args;
    mine_args.threads = env_threads;
    auto add_mine_flags = [&](CLI::App* sub) {
        sub->add_option("--input", mine_args.input, "input CSV with a header row")->required();
        sub->add_option("--label-col", mine_args.label_col, "label column name");
        sub->add_option("--alpha", mine_args.alpha, "significance level")->check(kAlphaCheck);
        sub->add_option("--out", mine_args.out, "result JSON path")->required();
        sub->add_option("--threads", mine_args.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--max-order", mine_args.max_order, "combination size cap (0 = unlimited)");
        sub->add_option("--progress", mine_args.progress, "progress report interval in visited nodes");
    };
    CLI::App* mine_cmd = app.add_subcommand("mine", "mine significant combinations (copula supports)");
    add_mine_flags(mine_cmd);
    mine_cmd->add_option("--dump-ranks", mine_args.dump_ranks, "write the rank matrix as TSV");

    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "median-binarize, then mine binary itemsets");
    add_mine_flags(baseline_cmd);
    baseline_cmd->add_option("--export-binary", mine_args.export_binary,
                             "write the binarized dataset as CSV");

    SynthArgs synth_args;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic data with planted signal");
    synth_cmd->add_option("--N", synth_args.n_samples, "sample count")->required();
    synth_cmd->add_option("--n", synth_args.n_features, "feature count")->required();
    synth_cmd->add_option("--r1", synth_args.r1, "minor class ratio");
    synth_cmd->add_option("--assoc-frac", synth_args.assoc_frac, "fraction of associated features");
    synth_cmd->add_option("--noise-sd", synth_args.noise_sd, "Gaussian noise standard deviation");
    synth_cmd->add_option("--seed", synth_args.seed, "RNG seed");
    synth_cmd->add_option("--out", synth_args.out, "output CSV path")->required();

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "precision/recall of a result file");
    eval_cmd->add_option("--results", eval_args.results, "result JSON from mine/baseline")->required();
    eval_cmd->add_option("--truth", eval_args.truth, "ground-truth JSON sidecar")->required();
    eval_cmd->add_option("--out", eval_args.out, "evaluation JSON path")->required();

    FwerArgs fwer_args;
    fwer_args.threads = env_threads;
    CLI::App* fwer_cmd = app.add_subcommand("fwer", "empirical FWER on null data");
    fwer_cmd->add_option("--N", fwer_args.n_samples, "sample count");
    fwer_cmd->add_option("--n", fwer_args.n_features, "feature count");
    fwer_cmd->add_option("--r1", fwer_args.r1, "minor class ratio");
    fwer_cmd->add_option("--alpha", fwer_args.alpha, "significance level")->check(kAlphaCheck);
    fwer_cmd->add_option("--reps", fwer_args.reps, "repetitions")->check(CLI::PositiveNumber);
    fwer_cmd->add_option("--seed", fwer_args.seed, "master seed");
    fwer_cmd->add_option("--threads", fwer_args.threads, "parallel repetitions")->check(CLI::PositiveNumber);
    fwer_cmd->add_option("--out", fwer_args.out, "report JSON path")->required();

    BenchArgs bench_args;
    bench_args.threads = env_threads;
    CLI::App* bench_cmd = app.add_subcommand("bench", "sweep N or n and compare both methods");
    bench_cmd->add_option("--vary", bench_args.vary, "sweep variable")
        ->check(CLI::IsMember({"N", "n"}));
    bench_cmd->add_option("--values", bench_args.values, "sweep values")->required()->delimiter(',');
    bench_cmd->add_option("--N", bench_args.n_samples, "fixed sample count");
    bench_cmd->add_option("--n", bench_args.n_features, "fixed feature count");
    bench_cmd->add_option("--r1", bench_args.r1, "minor class ratio");
    bench_cmd->add_option("--alpha", bench_args.alpha, "significance level")->check(kAlphaCheck);
    bench_cmd->add_option("--assoc-frac", bench_args.assoc_frac, "fraction of associated features");
    bench_cmd->add_option("--noise-sd", bench_args.noise_sd, "Gaussian noise standard deviation");
    bench_cmd->add_option("--seeds", bench_args.seeds, "seeds per configuration")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_args.seed, "master seed");
    bench_cmd->add_option("--threads", bench_args.threads, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", bench_args.out, "output TSV path")->required();
    bench_cmd->add_option("--json", bench_args.json_out, "also write per-run reports as JSON");

    std::vector<char*> argv;
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("sigcomb");
    for (const auto& a : args) storage.push_back(a);
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(mine_cmd)) return cmd_mine(mine_args, false);
        if (app.got_subcommand(baseline_cmd)) return cmd_mine(mine_args, true);
        if (app.got_subcommand(synth_cmd)) return cmd_synth(synth_args);
        if (app.got_subcommand(eval_cmd)) return cmd_eval(eval_args);
        if (app.got_subcommand(fwer_cmd)) return cmd_fwer(fwer_args);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_args);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace sigcomb::cli
