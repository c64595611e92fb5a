// Acceptance gate for the shipped library and CLI. Runs one check per
// release criterion and prints a PASS/FAIL line for each; the process exits
// nonzero if any criterion fails. Checks mirror the CLI wiring exactly so a
// green run certifies the user-facing pipeline, not a parallel code path.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <vector>

#include "gridssq/domain.hpp"
#include "gridssq/evolution.hpp"
#include "gridssq/indices.hpp"
#include "gridssq/io.hpp"
#include "gridssq/neural.hpp"
#include "gridssq/rng.hpp"
#include "gridssq/simulator.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gridssq;

namespace {

class Stopwatch {
public:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int g_failures = 0;

void report(int criterion, bool ok, const std::string& label, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n" << std::flush;
    if (!ok) ++g_failures;
}

template <typename Fn>
void criterion(int number, const std::string& label, Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const std::exception& e) {
        report(number, false, label, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) { return format_double(v); }

int threads_available() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, std::max(1u, hw)));
}

// ------------------------------------------------------------------ CLI glue

std::string cli_binary() {
    if (const char* env = std::getenv("GRIDSSQ_CLI")) return env;
    return "./gridssq";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

bool is_manifest(const fs::path& p) {
    return p.filename().string().ends_with(".manifest.json");
}

// Compares every non-manifest regular file under two directories. Manifests
// are excluded because they record wall-clock durations.
std::optional<std::string> compare_artifacts(const fs::path& a, const fs::path& b) {
    std::size_t count_a = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file() || is_manifest(entry.path())) continue;
        ++count_a;
        const fs::path rel = fs::relative(entry.path(), a);
        const fs::path other = b / rel;
        if (!fs::exists(other)) return rel.string() + " missing from replay";
        if (slurp(entry.path()) != slurp(other)) return rel.string() + " differs";
    }
    std::size_t count_b = 0;
    for (const auto& entry : fs::recursive_directory_iterator(b)) {
        if (entry.is_regular_file() && !is_manifest(entry.path())) ++count_b;
    }
    if (count_a != count_b) return "replay produced a different artifact set";
    return std::nullopt;
}

// Re-runs a command from its manifest with only the output directory swapped
// and reports the first byte difference, if any.
std::optional<std::string> replay_and_compare(const fs::path& manifest_path,
                                              const std::string& out_a, const std::string& out_b) {
    const RunManifest manifest = read_manifest(manifest_path);
    std::string args;
    for (const auto& arg : manifest.resolved_args) {
        args += arg == out_a ? out_b : arg;
        args += ' ';
    }
    const int code = run_cli(args);
    if (code != 0)
        return manifest.command + " replay exited with code " + std::to_string(code);
    if (auto diff = compare_artifacts(out_a, out_b))
        return manifest.command + ": " + *diff;
    return std::nullopt;
}

// ------------------------------------------------------- shared experiment

// The reference experiment: 4,000 labeled samples from the default scenario
// with feature noise 0.02, split 3,900 / 100, model 8-24-1. Built once and
// reused by the criteria that train on it.
struct ProtocolData {
    std::vector<Sample> train;  // normalized features, normalized labels
    std::vector<Sample> test;
    NormalizationMeta meta;
    NetShape shape{};
};

ProtocolData build_protocol_data() {
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.feature_noise_sigma = 0.02;
    const ScenarioData scenario = generate_scenario(cfg);
    DatasetBuild build = build_dataset(scenario.inventory, scenario.events, cfg, 4000);
    auto [train_raw, test_raw] = split_dataset(build.samples, 3900, 1);
    ProtocolData data;
    data.train = normalize_dataset_features(build.meta, train_raw);
    data.test = normalize_dataset_features(build.meta, test_raw);
    data.meta = build.meta;
    data.shape = {data.train.front().x.size(), 9, data.train.front().y.size()};
    return data;
}

// Same seed wiring as the CLI `train` command.
GaConfig protocol_ga(std::uint64_t seed) {
    GaConfig ga;
    ga.seed = derive_seed(seed, stream::ga_seed);
    ga.threads = threads_available();
    return ga;
}

BpConfig protocol_bp(std::uint64_t seed) {
    BpConfig bp;
    bp.seed = derive_seed(seed, stream::bp_seed);
    return bp;
}

double test_mae(const MlpParams& model, const std::vector<Sample>& test) {
    return loss_abs(model, test);
}

MlpParams plain_bp_model(const ProtocolData& data, std::uint64_t seed) {
    Rng init(derive_seed(seed, stream::ga_init));
    MlpParams model = decode(random_chromosome(data.shape, -1.0, 1.0, init).genes, data.shape);
    model.norm = data.meta;
    return train_bp(model, data.train, protocol_bp(seed));
}

}  // namespace

int main() {
    std::optional<ProtocolData> proto;
    double seed1_hybrid_mae = 0.0;

    criterion(1, "index pipeline matches an independent naive oracle", [&] {
        Stopwatch watch;
        Rng rng(20260801);
        double worst = 0.0;
        const int instances = 1000;
        for (int i = 0; i < instances; ++i) {
            const oracle::Instance inst = oracle::random_instance(rng);
            const SituationRecord rec = compute_situation(inst.inventory, inst.window, inst.policy);
            const oracle::NaiveResult naive = oracle::naive_situation(inst);
            worst = std::max(worst, oracle::rel_err(rec.r_lq, naive.r_lq));
            for (std::size_t h = 0; h < naive.host_tr.size(); ++h) {
                worst = std::max(worst, oracle::rel_err(rec.host_tr[h], naive.host_tr[h]));
                worst = std::max(worst, oracle::rel_err(rec.host_rh[h], naive.host_rh[h]));
                for (std::size_t j = 0; j < naive.service_rs[h].size(); ++j)
                    worst = std::max(worst,
                                     oracle::rel_err(rec.service_rs[h][j], naive.service_rs[h][j]));
            }
        }
        const double secs = watch.elapsed();
        report(1, worst <= 1e-12 && secs < 5.0,
               "index pipeline matches an independent naive oracle",
               "worst rel err " + fmt(worst) + " over 1000 instances, " + fmt(secs) + "s");
    });

    criterion(2, "hand-computed fixtures reproduce exactly", [&] {
        auto close = [](double got, double want) {
            return std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want));
        };
        std::string bad;

        const double rs = reliability_index({{"dos", {2, 2.0}}, {"pod", {1, 1.5}}});
        if (!close(rs, 210.0)) bad += " reliability=" + fmt(rs);

        const double tr = vulnerability_index({0.2, 0.3, 0.5}, {10.0, 20.0, 30.0});
        if (!close(tr, 23.0)) bad += " vulnerability=" + fmt(tr);

        NetworkInventory inv;
        inv.hosts.push_back({"h1", 1.0, 0.0, {{"s1", 1.0}}});
        inv.hosts.push_back({"h2", 3.0, 0.0, {{"s1", 1.0}}});
        AttackWindow window;
        window.length = 60.0;
        window.targets[{"h1", "s1"}]["dos"] = {2, 2.0};
        const SituationRecord rec = compute_situation(inv, window, {});
        if (!close(rec.r_lq, 50.0)) bad += " r_lq=" + fmt(rec.r_lq);

        const double eta = correction_factor(0.25);
        if (!close(eta, 1.25)) bad += " eta=" + fmt(eta);

        MlpParams net = MlpParams::zeros({1, 1, 1});
        net.w_ih = {1.0};
        net.w_ho = {2.0};
        net.b = {0.5};
        const double out = forward(net, {0.0}).output[0];
        if (!close(out, 0.5)) bad += " output=" + fmt(out);

        const std::vector<double> probs = selection_probabilities({1.0, 3.0});
        if (!close(probs[0], 0.75) || !close(probs[1], 0.25))
            bad += " probs=[" + fmt(probs[0]) + "," + fmt(probs[1]) + "]";

        const Chromosome child = crossover({{0.0, 2.0}}, {{2.0, 0.0}}, 0.5);
        if (!close(child.genes[0], 1.0) || !close(child.genes[1], 1.0))
            bad += " crossover=[" + fmt(child.genes[0]) + "," + fmt(child.genes[1]) + "]";

        report(2, bad.empty(), "hand-computed fixtures reproduce exactly",
               bad.empty() ? "reliability 210, vulnerability 23, situation 50, eta 1.25, "
                             "output 0.5, probs [0.75,0.25], crossover [1,1]"
                           : "mismatch:" + bad);
    });

    criterion(3, "analytic gradient matches central finite differences", [&] {
        Stopwatch watch;
        Rng rng(777);
        double worst = 0.0;
        const int nets = 120;
        for (int i = 0; i < nets; ++i) {
            const std::size_t n = 1 + rng.uniform_index(6);
            const std::size_t l = 1 + rng.uniform_index(6);
            const std::size_t m = 1 + rng.uniform_index(6);
            const MlpParams net = oracle::random_net(rng, n, l, m);
            const Sample sample = oracle::random_sample(rng, n, m);
            worst = std::max(worst, oracle::max_gradient_deviation(net, sample));
        }
        const double secs = watch.elapsed();
        report(3, worst < 1e-5 && secs < 10.0,
               "analytic gradient matches central finite differences",
               "worst rel err " + fmt(worst) + " over " + std::to_string(nets) + " nets, " +
                   fmt(secs) + "s");
    });

    criterion(4, "selection probabilities, roulette frequencies and elitism hold", [&] {
        Stopwatch watch;
        std::string bad;

        Rng rng(3131);
        for (int round = 0; round < 200 && bad.empty(); ++round) {
            const std::size_t size = 2 + rng.uniform_index(39);
            std::vector<double> fitness_values;
            double level = rng.uniform(1e-3, 0.5);
            for (std::size_t i = 0; i < size; ++i) {
                level += rng.uniform(1e-3, 1.0);
                fitness_values.push_back(level);
            }
            const std::vector<double> probs = selection_probabilities(fitness_values);
            double sum = 0.0;
            for (double p : probs) sum += p;
            if (std::abs(sum - 1.0) > 1e-12) bad = "sum deviates by " + fmt(std::abs(sum - 1.0));
            for (std::size_t i = 0; i + 1 < probs.size(); ++i)
                if (!(probs[i] > probs[i + 1])) bad = "probabilities not strictly decreasing";
        }

        if (bad.empty()) {
            const std::vector<Chromosome> population{{{0.0}}, {{1.0}}};
            const std::vector<double> probs = selection_probabilities({1.0, 3.0});
            Rng spins(4242);
            std::size_t zero_picks = 0;
            const std::size_t pairs = 50000;
            for (std::size_t i = 0; i < pairs; ++i) {
                const auto [a, b] = select_parents(population, probs, spins);
                zero_picks += (a == 0) + (b == 0);
            }
            const double freq = static_cast<double>(zero_picks) / (2.0 * pairs);
            if (std::abs(freq - 0.75) > 0.01)
                bad = "roulette frequency " + fmt(freq) + " vs expected 0.75";
        }

        if (bad.empty()) {
            Rng teacher_rng(555);
            const MlpParams teacher = oracle::random_net(teacher_rng, 2, 3, 1);
            std::vector<Sample> samples;
            for (int i = 0; i < 30; ++i) {
                Sample s = oracle::random_sample(teacher_rng, 2, 1);
                s.y = forward(teacher, s.x).output;
                samples.push_back(std::move(s));
            }
            for (std::uint64_t seed = 1; seed <= 10 && bad.empty(); ++seed) {
                GaConfig cfg;
                cfg.population = 12;
                cfg.generations = 15;
                cfg.seed = seed;
                const EvolveResult result = evolve(samples, {2, 3, 1}, cfg);
                for (std::size_t g = 1; g < result.history.size(); ++g)
                    if (result.history[g].best_fitness > result.history[g - 1].best_fitness)
                        bad = "best fitness rose at seed " + std::to_string(seed) +
                              " generation " + std::to_string(g);
            }
        }

        const double secs = watch.elapsed();
        report(4, bad.empty() && secs < 30.0,
               "selection probabilities, roulette frequencies and elitism hold",
               bad.empty() ? "200 populations, 100k draws, 10 seeded runs, " + fmt(secs) + "s"
                           : bad);
    });

    criterion(5, "reference protocol reaches the error band on held-out data", [&] {
        Stopwatch watch;
        proto = build_protocol_data();
        const HybridResult result =
            hybrid_train(proto->train, proto->shape, protocol_ga(1), protocol_bp(1), proto->meta);

        double abs_sum = 0.0;
        std::size_t within = 0;
        for (const Sample& s : proto->test) {
            const double predicted = forward(result.model, s.x).output[0];
            const double err = predicted - s.y[0];
            abs_sum += std::abs(err);
            if (std::abs(err) <= 0.02) ++within;
        }
        const double mae = abs_sum / static_cast<double>(proto->test.size());
        seed1_hybrid_mae = mae;
        const double frac = static_cast<double>(within) / static_cast<double>(proto->test.size());
        const double secs = watch.elapsed();
        report(5, frac >= 0.90 && mae <= 0.015 && secs < 300.0,
               "reference protocol reaches the error band on held-out data",
               "4000 samples, split 3900/100, frac_within_002=" + fmt(frac) + " mae=" + fmt(mae) +
                   ", " + fmt(secs) + "s");
    });

    criterion(6, "hybrid training beats plain backpropagation on average", [&] {
        if (!proto) {
            report(6, false, "hybrid training beats plain backpropagation on average",
                   "reference dataset unavailable");
            return;
        }
        Stopwatch watch;
        double hybrid_sum = 0.0;
        double plain_sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            if (seed == 1) {
                hybrid_sum += seed1_hybrid_mae;
            } else {
                const HybridResult result = hybrid_train(proto->train, proto->shape,
                                                         protocol_ga(seed), protocol_bp(seed),
                                                         proto->meta);
                hybrid_sum += test_mae(result.model, proto->test);
            }
            plain_sum += test_mae(plain_bp_model(*proto, seed), proto->test);
        }
        const double hybrid_mean = hybrid_sum / 5.0;
        const double plain_mean = plain_sum / 5.0;
        report(6, hybrid_mean <= plain_mean,
               "hybrid training beats plain backpropagation on average",
               "5 seeds, mean test mae hybrid=" + fmt(hybrid_mean) + " plain=" + fmt(plain_mean) +
                   ", " + fmt(watch.elapsed()) + "s");
    });

    criterion(7, "correlated regime scores above the resilient regime", [&] {
        const RegimeScenarios regimes = regime_scenarios();
        struct Stats {
            double mean_tr = 0.0;
            std::size_t windows = 0;
            std::size_t nonzero = 0;
        };
        auto run = [](const ScenarioConfig& cfg) {
            const ScenarioData data = generate_scenario(cfg);
            const auto windows = window_events(data.events, cfg.window_seconds, cfg.horizon());
            Stats stats;
            stats.windows = windows.size();
            double tr_sum = 0.0;
            std::size_t tr_count = 0;
            for (const auto& window : windows) {
                const SituationRecord rec = compute_situation(data.inventory, window, {});
                for (double tr : rec.host_tr) {
                    tr_sum += tr;
                    ++tr_count;
                }
                if (rec.r_lq > 0.0) ++stats.nonzero;
            }
            stats.mean_tr = tr_sum / static_cast<double>(tr_count);
            return stats;
        };
        const Stats corr = run(regimes.correlated);
        const Stats res = run(regimes.resilient);
        const bool ok = corr.mean_tr > res.mean_tr && corr.windows == 10 && res.windows == 10 &&
                        corr.nonzero >= 8 && res.nonzero >= 8;
        report(7, ok, "correlated regime scores above the resilient regime",
               "mean TR " + fmt(corr.mean_tr) + " vs " + fmt(res.mean_tr) + ", nonzero windows " +
                   std::to_string(corr.nonzero) + "/10 and " + std::to_string(res.nonzero) +
                   "/10");
    });

    criterion(8, "every command replayed from its manifest is byte-identical", [&] {
        Stopwatch watch;
        const fs::path root = fs::temp_directory_path() /
                              ("gridssq-acceptance-" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
        const auto dir = [&](const char* name) { return (root / name).string(); };

        std::string bad;
        auto step = [&](const std::string& args, const char* manifest, const std::string& out_a,
                        const std::string& out_b) {
            if (!bad.empty()) return;
            const int code = run_cli(args);
            if (code != 0) {
                bad = "command exited with code " + std::to_string(code) + ": " + args;
                return;
            }
            if (auto diff = replay_and_compare(fs::path(out_a) / manifest, out_a, out_b))
                bad = *diff;
        };

        step("simulate --seed 5 --hosts 3 --services 2 --periods 6 --out " + dir("sim_a"),
             "simulate.manifest.json", dir("sim_a"), dir("sim_b"));
        step("dataset --seed 5 --samples 60 --train-count 48 --noise 0.02 --out " + dir("data_a"),
             "dataset.manifest.json", dir("data_a"), dir("data_b"));
        step("indices --inventory " + dir("sim_a") + "/inventory.json --events " + dir("sim_a") +
                 "/events.jsonl --out " + dir("idx_a"),
             "indices.manifest.json", dir("idx_a"), dir("idx_b"));
        step("train --train " + dir("data_a") + "/train.csv --hidden 6 --seed 3 --pop 8 "
                 "--generations 4 --epochs 6 --threads 2 --out " + dir("train_a"),
             "train.manifest.json", dir("train_a"), dir("train_b"));
        step("evaluate --model " + dir("train_a") + "/model.json --test " + dir("data_a") +
                 "/test.csv --out " + dir("eval_a"),
             "evaluate.manifest.json", dir("eval_a"), dir("eval_b"));
        step("predict --model " + dir("train_a") + "/model.json --values 1,2,3,4,5,6,7,8 --out " +
                 dir("pred_a"),
             "predict.manifest.json", dir("pred_a"), dir("pred_b"));
        step("regimes --out " + dir("reg_a"), "regimes.manifest.json", dir("reg_a"), dir("reg_b"));

        if (bad.empty()) {
            const int code = run_cli("train --train " + dir("data_a") +
                                     "/train.csv --hidden 6 --seed 3 --pop 8 --generations 4 "
                                     "--epochs 6 --threads 1 --out " + dir("train_c"));
            if (code != 0)
                bad = "single-thread train exited with code " + std::to_string(code);
            else if (slurp(root / "train_a" / "model.json") !=
                     slurp(root / "train_c" / "model.json"))
                bad = "model bytes depend on the thread count";
        }

        fs::remove_all(root);
        report(8, bad.empty(), "every command replayed from its manifest is byte-identical",
               bad.empty() ? "7 commands replayed, thread counts 1 and 2 agree, " +
                                 fmt(watch.elapsed()) + "s"
                           : bad);
    });

    std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: " + std::to_string(g_failures) +
                                        " criterion(s) failed")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
