// Command-line pipeline: simulate -> indices -> dataset -> train -> evaluate
// -> predict, plus the fixed regime comparison. Every command resolves its
// full configuration up front, writes its artifacts atomically and drops a
// manifest sidecar whose resolved_args replay the run bit for bit.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gridssq/domain.hpp"
#include "gridssq/errors.hpp"
#include "gridssq/evolution.hpp"
#include "gridssq/indices.hpp"
#include "gridssq/io.hpp"
#include "gridssq/neural.hpp"
#include "gridssq/rng.hpp"
#include "gridssq/simulator.hpp"
#include "gridssq/version.hpp"

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

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = text.find(',', begin);
        const std::string cell = text.substr(begin, end == std::string::npos ? std::string::npos
                                                                             : end - begin);
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw Error(ErrorKind::ParseError, "bad number \"" + cell + "\" in --values");
        out.push_back(v);
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return out;
}

// Feature CSV for predict: header f1..fN, optionally followed by a y column
// whose values are ignored.
std::vector<std::vector<double>> read_feature_rows(const fs::path& path) {
    std::vector<std::vector<double>> rows;
    const std::string text = read_text_file(path);
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line))
        throw Error(ErrorKind::ParseError, path.string() + ": empty file, expected a header");
    std::vector<std::string> columns;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) columns.push_back(cell);
    }
    bool has_label = !columns.empty() && columns.back() == "y";
    const std::size_t n = columns.size() - (has_label ? 1 : 0);
    if (n < 1) throw Error(ErrorKind::ParseError, path.string() + ": header must be f1..fN[,y]");
    for (std::size_t i = 0; i < n; ++i)
        if (columns[i] != "f" + std::to_string(i + 1))
            throw Error(ErrorKind::ParseError, path.string() + ": header must be f1..fN[,y]");

    std::size_t line_no = 1;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<double> values = [&] {
            try {
                return parse_value_list(line);
            } catch (const Error&) {
                throw Error(ErrorKind::ParseError,
                            path.string() + ":" + std::to_string(line_no) + ": bad number");
            }
        }();
        if (values.size() != columns.size())
            throw Error(ErrorKind::ParseError,
                        path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(columns.size()) + " fields");
        rows.emplace_back(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return rows;
}

void push_arg(std::vector<std::string>& args, const std::string& flag, const std::string& value) {
    args.push_back(flag);
    args.push_back(value);
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
    std::uint64_t seed = 1;
    std::size_t hosts = 1;
    std::size_t services = 3;
    std::size_t periods = 10;
    double dt = 60.0;
    double intensity = 1.0;
    std::string out;
};

void run_simulate(const SimulateArgs& a) {
    Stopwatch watch;
    ScenarioConfig cfg;
    cfg.seed = a.seed;
    cfg.hosts = a.hosts;
    cfg.services_per_host = a.services;
    cfg.periods = a.periods;
    cfg.window_seconds = a.dt;
    cfg.intensity = a.intensity;
    const ScenarioData data = generate_scenario(cfg);

    const fs::path out(a.out);
    write_inventory(out / "inventory.json", data.inventory);
    write_event_log(out / "events.jsonl", data.events);

    RunManifest m;
    m.command = "simulate";
    m.config = {{"seed", a.seed},      {"hosts", a.hosts},         {"services", a.services},
                {"periods", a.periods}, {"dt", a.dt},               {"intensity", a.intensity},
                {"out", a.out}};
    m.resolved_args = {"simulate"};
    push_arg(m.resolved_args, "--seed", std::to_string(a.seed));
    push_arg(m.resolved_args, "--hosts", std::to_string(a.hosts));
    push_arg(m.resolved_args, "--services", std::to_string(a.services));
    push_arg(m.resolved_args, "--periods", std::to_string(a.periods));
    push_arg(m.resolved_args, "--dt", format_double(a.dt));
    push_arg(m.resolved_args, "--intensity", format_double(a.intensity));
    push_arg(m.resolved_args, "--out", a.out);
    m.outputs = {(out / "inventory.json").string(), (out / "events.jsonl").string()};
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "simulate.manifest.json", m);
}

// ------------------------------------------------------------------ indices

struct IndicesArgs {
    std::string inventory;
    std::string events;
    double dt = 60.0;
    double horizon = 0.0;  // 0 = derive from the last event
    double eta_min = 1.0;
    double eta_max = 2.0;
    std::string out;
};

void run_indices(const IndicesArgs& a) {
    Stopwatch watch;
    const NetworkInventory inv = read_inventory(a.inventory);
    const std::vector<AttackEvent> events = parse_event_log(a.events);

    double horizon = a.horizon;
    if (horizon <= 0.0) {
        if (events.empty())
            throw Error(ErrorKind::ConfigInvalid,
                        "cannot derive a horizon from an empty event log; pass --horizon");
        double max_t = 0.0;
        for (const auto& ev : events) max_t = std::max(max_t, ev.t);
        horizon = (std::floor(max_t / a.dt) + 1.0) * a.dt;
    }

    const CorrectionPolicy policy{a.eta_min, a.eta_max};
    const std::vector<AttackWindow> windows = window_events(events, a.dt, horizon);
    std::vector<SituationRecord> records;
    records.reserve(windows.size());
    for (const auto& w : windows) records.push_back(compute_situation(inv, w, policy));

    const fs::path out(a.out);
    write_situation_csv(out / "situation.csv", inv, records);

    RunManifest m;
    m.command = "indices";
    m.config = {{"inventory", a.inventory}, {"events", a.events}, {"dt", a.dt},
                {"horizon", horizon},       {"eta_min", a.eta_min}, {"eta_max", a.eta_max},
                {"out", a.out}};
    m.resolved_args = {"indices"};
    push_arg(m.resolved_args, "--inventory", a.inventory);
    push_arg(m.resolved_args, "--events", a.events);
    push_arg(m.resolved_args, "--dt", format_double(a.dt));
    push_arg(m.resolved_args, "--horizon", format_double(horizon));
    push_arg(m.resolved_args, "--eta-min", format_double(a.eta_min));
    push_arg(m.resolved_args, "--eta-max", format_double(a.eta_max));
    push_arg(m.resolved_args, "--out", a.out);
    m.inputs = {a.inventory, a.events};
    m.outputs = {(out / "situation.csv").string()};
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "indices.manifest.json", m);
}

// ------------------------------------------------------------------ dataset

struct DatasetArgs {
    std::uint64_t seed = 1;
    std::size_t hosts = 1;
    std::size_t services = 3;
    std::size_t periods = 10;
    double dt = 60.0;
    double intensity = 1.0;
    double noise = 0.0;
    std::size_t samples = 4000;
    std::size_t train_count = 0;  // 0 = no split
    std::string out;
};

void run_dataset(const DatasetArgs& a) {
    Stopwatch watch;
    ScenarioConfig cfg;
    cfg.seed = a.seed;
    cfg.hosts = a.hosts;
    cfg.services_per_host = a.services;
    cfg.periods = a.periods;
    cfg.window_seconds = a.dt;
    cfg.intensity = a.intensity;
    cfg.feature_noise_sigma = a.noise;

    const ScenarioData data = generate_scenario(cfg);
    const DatasetBuild build = build_dataset(data.inventory, data.events, cfg, a.samples);

    const fs::path out(a.out);
    write_dataset_csv(out / "dataset.csv", build.samples);
    write_norm_meta(out / "dataset.norm.json", build.meta);
    std::vector<std::string> outputs = {(out / "dataset.csv").string(),
                                        (out / "dataset.norm.json").string()};

    if (a.train_count > 0) {
        const auto [train, test] = split_dataset(build.samples, a.train_count, a.seed);
        write_dataset_csv(out / "train.csv", train);
        write_norm_meta(out / "train.norm.json", build.meta);
        outputs.push_back((out / "train.csv").string());
        outputs.push_back((out / "train.norm.json").string());
        if (!test.empty()) {
            write_dataset_csv(out / "test.csv", test);
            write_norm_meta(out / "test.norm.json", build.meta);
            outputs.push_back((out / "test.csv").string());
            outputs.push_back((out / "test.norm.json").string());
        }
    }

    RunManifest m;
    m.command = "dataset";
    m.config = {{"seed", a.seed},       {"hosts", a.hosts},
                {"services", a.services}, {"periods", a.periods},
                {"dt", a.dt},           {"intensity", a.intensity},
                {"noise", a.noise},     {"samples", a.samples},
                {"train_count", a.train_count}, {"out", a.out}};
    m.resolved_args = {"dataset"};
    push_arg(m.resolved_args, "--seed", std::to_string(a.seed));
    push_arg(m.resolved_args, "--hosts", std::to_string(a.hosts));
    push_arg(m.resolved_args, "--services", std::to_string(a.services));
    push_arg(m.resolved_args, "--periods", std::to_string(a.periods));
    push_arg(m.resolved_args, "--dt", format_double(a.dt));
    push_arg(m.resolved_args, "--intensity", format_double(a.intensity));
    push_arg(m.resolved_args, "--noise", format_double(a.noise));
    push_arg(m.resolved_args, "--samples", std::to_string(a.samples));
    push_arg(m.resolved_args, "--train-count", std::to_string(a.train_count));
    push_arg(m.resolved_args, "--out", a.out);
    m.outputs = std::move(outputs);
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "dataset.manifest.json", m);
}

// -------------------------------------------------------------------- train

struct TrainArgs {
    std::string train;
    std::string norm;  // default: train path with .csv replaced by .norm.json
    std::size_t hidden = 9;
    std::uint64_t seed = 1;
    std::size_t pop = 40;
    std::size_t generations = 50;
    double crossover = 0.8;
    double mutation = 0.05;
    double sigma = 0.1;
    std::size_t elitism = 1;
    double gene_min = -5.0;
    double gene_max = 5.0;
    double init_min = -1.0;
    double init_max = 1.0;
    double target = 0.0;  // 0 = disabled
    std::size_t epochs = 200;
    double lr = 0.05;
    std::size_t batch = 32;
    int threads = 1;
    bool no_ga = false;
    std::string out;
};

void run_train(const TrainArgs& a) {
    Stopwatch watch;
    const fs::path train_path(a.train);
    const fs::path norm_path =
        a.norm.empty() ? fs::path(a.train).replace_extension(".norm.json") : fs::path(a.norm);

    const std::vector<Sample> raw = read_dataset_csv(train_path);
    if (raw.empty()) throw Error(ErrorKind::DatasetInvalid, a.train + ": no samples");
    const NormalizationMeta meta = read_norm_meta(norm_path);
    if (meta.x_min.size() != raw.front().x.size() || meta.y_min.size() != raw.front().y.size())
        throw Error(ErrorKind::DatasetInvalid,
                    a.train + ": normalization metadata does not match the dataset shape");

    const std::vector<Sample> samples = normalize_dataset_features(meta, raw);
    const NetShape shape{samples.front().x.size(), a.hidden, samples.front().y.size()};

    BpConfig bp;
    bp.learning_rate = a.lr;
    bp.epochs = a.epochs;
    bp.batch_size = a.batch;
    bp.seed = derive_seed(a.seed, stream::bp_seed);

    const fs::path out(a.out);
    MlpParams model;
    std::vector<GenerationStats> history;
    if (a.no_ga) {
        Rng init(derive_seed(a.seed, stream::ga_init));
        model = decode(random_chromosome(shape, a.init_min, a.init_max, init).genes, shape);
        model.norm = meta;
        if (a.epochs > 0) model = train_bp(model, samples, bp);
    } else {
        GaConfig ga;
        ga.population = a.pop;
        ga.generations = a.generations;
        ga.crossover_prob = a.crossover;
        ga.mutation_prob = a.mutation;
        ga.mutation_sigma = a.sigma;
        ga.elitism = a.elitism;
        ga.gene_min = a.gene_min;
        ga.gene_max = a.gene_max;
        ga.init_min = a.init_min;
        ga.init_max = a.init_max;
        if (a.target > 0.0) ga.fitness_target = a.target;
        ga.seed = derive_seed(a.seed, stream::ga_seed);
        ga.threads = a.threads;
        HybridResult result = hybrid_train(samples, shape, ga, bp, meta);
        model = std::move(result.model);
        history = std::move(result.evolution.history);
    }

    write_model(out / "model.json", model);
    write_history_csv(out / "history.csv", history);

    RunManifest m;
    m.command = "train";
    m.config = {{"train", a.train},       {"norm", norm_path.string()},
                {"hidden", a.hidden},     {"seed", a.seed},
                {"pop", a.pop},           {"generations", a.generations},
                {"crossover", a.crossover}, {"mutation", a.mutation},
                {"sigma", a.sigma},       {"elitism", a.elitism},
                {"gene_min", a.gene_min}, {"gene_max", a.gene_max},
                {"init_min", a.init_min}, {"init_max", a.init_max},
                {"target", a.target},     {"epochs", a.epochs},
                {"lr", a.lr},             {"batch", a.batch},
                {"threads", a.threads},   {"no_ga", a.no_ga},
                {"out", a.out}};
    m.resolved_args = {"train"};
    push_arg(m.resolved_args, "--train", a.train);
    push_arg(m.resolved_args, "--norm", norm_path.string());
    push_arg(m.resolved_args, "--hidden", std::to_string(a.hidden));
    push_arg(m.resolved_args, "--seed", std::to_string(a.seed));
    push_arg(m.resolved_args, "--pop", std::to_string(a.pop));
    push_arg(m.resolved_args, "--generations", std::to_string(a.generations));
    push_arg(m.resolved_args, "--crossover", format_double(a.crossover));
    push_arg(m.resolved_args, "--mutation", format_double(a.mutation));
    push_arg(m.resolved_args, "--sigma", format_double(a.sigma));
    push_arg(m.resolved_args, "--elitism", std::to_string(a.elitism));
    push_arg(m.resolved_args, "--gene-min", format_double(a.gene_min));
    push_arg(m.resolved_args, "--gene-max", format_double(a.gene_max));
    push_arg(m.resolved_args, "--init-min", format_double(a.init_min));
    push_arg(m.resolved_args, "--init-max", format_double(a.init_max));
    push_arg(m.resolved_args, "--target", format_double(a.target));
    push_arg(m.resolved_args, "--epochs", std::to_string(a.epochs));
    push_arg(m.resolved_args, "--lr", format_double(a.lr));
    push_arg(m.resolved_args, "--batch", std::to_string(a.batch));
    push_arg(m.resolved_args, "--threads", std::to_string(a.threads));
    if (a.no_ga) m.resolved_args.push_back("--no-ga");
    push_arg(m.resolved_args, "--out", a.out);
    m.inputs = {a.train, norm_path.string()};
    m.outputs = {(out / "model.json").string(), (out / "history.csv").string()};
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "train.manifest.json", m);
}

// ----------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string model;
    std::string test;
    std::string out;
};

void run_evaluate(const EvaluateArgs& a) {
    Stopwatch watch;
    const MlpParams model = read_model(a.model);
    const std::vector<Sample> samples = read_dataset_csv(a.test);
    if (samples.empty()) throw Error(ErrorKind::DatasetInvalid, a.test + ": no samples");
    if (samples.front().x.size() != model.inputs || samples.front().y.size() != model.outputs)
        throw Error(ErrorKind::SchemaMismatch,
                    "model expects " + std::to_string(model.inputs) + " features and " +
                        std::to_string(model.outputs) + " labels, dataset has " +
                        std::to_string(samples.front().x.size()) + "/" +
                        std::to_string(samples.front().y.size()));

    std::vector<ReportRow> rows;
    rows.reserve(samples.size());
    double abs_sum = 0.0;
    double max_abs = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Activation act = forward(model, normalize_features(model.norm, samples[i].x));
        const double predicted = act.output.at(0);
        const double actual = samples[i].y.at(0);
        const double error = predicted - actual;
        rows.push_back({i, actual, predicted, error});
        abs_sum += std::abs(error);
        max_abs = std::max(max_abs, std::abs(error));
        if (std::abs(error) <= 0.02) ++within;
    }
    const double mae = abs_sum / static_cast<double>(samples.size());
    const double frac = static_cast<double>(within) / static_cast<double>(samples.size());

    const fs::path out(a.out);
    write_report_csv(out / "report.csv", rows);
    const json summary{{"count", samples.size()},
                       {"mae", mae},
                       {"max_abs_error", max_abs},
                       {"frac_within_002", frac}};
    atomic_write_text(out / "summary.json", summary.dump(2) + "\n");

    std::cout << "count=" << samples.size() << " mae=" << format_double(mae)
              << " max_abs_error=" << format_double(max_abs)
              << " frac_within_002=" << format_double(frac) << "\n";

    RunManifest m;
    m.command = "evaluate";
    m.config = {{"model", a.model}, {"test", a.test}, {"out", a.out}};
    m.resolved_args = {"evaluate"};
    push_arg(m.resolved_args, "--model", a.model);
    push_arg(m.resolved_args, "--test", a.test);
    push_arg(m.resolved_args, "--out", a.out);
    m.inputs = {a.model, a.test};
    m.outputs = {(out / "report.csv").string(), (out / "summary.json").string()};
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "evaluate.manifest.json", m);
}

// ------------------------------------------------------------------ predict

struct PredictArgs {
    std::string model;
    std::vector<std::string> values;
    std::string features;
    std::string out;  // optional: also write predictions.csv + manifest
};

void run_predict(const PredictArgs& a) {
    Stopwatch watch;
    const MlpParams model = read_model(a.model);

    std::vector<std::vector<double>> rows;
    for (const auto& v : a.values) rows.push_back(parse_value_list(v));
    if (!a.features.empty()) {
        const auto file_rows = read_feature_rows(a.features);
        rows.insert(rows.end(), file_rows.begin(), file_rows.end());
    }
    if (rows.empty())
        throw Error(ErrorKind::ConfigInvalid, "predict needs --values or --features");

    std::string rendered;
    for (const auto& row : rows) {
        if (row.size() != model.inputs)
            throw Error(ErrorKind::SchemaMismatch,
                        "feature row has " + std::to_string(row.size()) +
                            " entries, model expects " + std::to_string(model.inputs));
        const Activation act = forward(model, normalize_features(model.norm, row));
        const std::vector<double> y = denormalize_labels(model.norm, act.output);
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (k > 0) rendered += ',';
            rendered += format_double(y[k]);
        }
        rendered += '\n';
    }
    std::cout << rendered;

    if (!a.out.empty()) {
        const fs::path out(a.out);
        std::string csv = "prediction\n" + rendered;
        atomic_write_text(out / "predictions.csv", csv);

        RunManifest m;
        m.command = "predict";
        m.config = {{"model", a.model}, {"values", a.values}, {"features", a.features},
                    {"out", a.out}};
        m.resolved_args = {"predict"};
        push_arg(m.resolved_args, "--model", a.model);
        for (const auto& v : a.values) push_arg(m.resolved_args, "--values", v);
        if (!a.features.empty()) push_arg(m.resolved_args, "--features", a.features);
        push_arg(m.resolved_args, "--out", a.out);
        m.inputs = {a.model};
        if (!a.features.empty()) m.inputs.push_back(a.features);
        m.outputs = {(out / "predictions.csv").string()};
        m.tool_version = version;
        m.duration_seconds = watch.elapsed();
        write_manifest(out / "predict.manifest.json", m);
    }
}

// ------------------------------------------------------------------ regimes

struct RegimesArgs {
    std::string out;
};

void run_regimes(const RegimesArgs& a) {
    Stopwatch watch;
    const RegimeScenarios regimes = regime_scenarios();
    const fs::path out(a.out);
    json summary = json::object();
    std::vector<std::string> outputs;

    const std::pair<const char*, const ScenarioConfig*> entries[] = {
        {"correlated", &regimes.correlated}, {"resilient", &regimes.resilient}};
    for (const auto& [name, cfg] : entries) {
        const ScenarioData data = generate_scenario(*cfg);
        const std::vector<AttackWindow> windows =
            window_events(data.events, cfg->window_seconds, cfg->horizon());
        std::vector<SituationRecord> records;
        records.reserve(windows.size());
        double tr_sum = 0.0;
        double rlq_sum = 0.0;
        std::size_t tr_terms = 0;
        std::size_t nonzero = 0;
        for (const auto& w : windows) {
            records.push_back(compute_situation(data.inventory, w));
            const SituationRecord& rec = records.back();
            for (double tr : rec.host_tr) {
                tr_sum += tr;
                ++tr_terms;
            }
            rlq_sum += rec.r_lq;
            if (rec.r_lq > 0.0) ++nonzero;
        }
        const fs::path dir = out / name;
        write_inventory(dir / "inventory.json", data.inventory);
        write_event_log(dir / "events.jsonl", data.events);
        write_situation_csv(dir / "situation.csv", data.inventory, records);
        outputs.push_back((dir / "inventory.json").string());
        outputs.push_back((dir / "events.jsonl").string());
        outputs.push_back((dir / "situation.csv").string());

        summary[name] = {{"windows", windows.size()},
                         {"mean_tr", tr_sum / static_cast<double>(tr_terms)},
                         {"mean_rlq", rlq_sum / static_cast<double>(windows.size())},
                         {"nonzero_rlq_windows", nonzero}};
    }

    atomic_write_text(out / "regimes_summary.json", summary.dump(2) + "\n");
    outputs.push_back((out / "regimes_summary.json").string());

    RunManifest m;
    m.command = "regimes";
    m.config = {{"out", a.out}};
    m.resolved_args = {"regimes"};
    push_arg(m.resolved_args, "--out", a.out);
    m.outputs = std::move(outputs);
    m.tool_version = version;
    m.duration_seconds = watch.elapsed();
    write_manifest(out / "regimes.manifest.json", m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Security situation quantification pipeline for power information networks"};
    app.set_version_flag("--version", version);
    app.require_subcommand(0, 1);

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic inventory and event log");
    sim_cmd->add_option("--seed", sim.seed, "Master seed");
    sim_cmd->add_option("--hosts", sim.hosts, "Host count")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--services", sim.services, "Services per host")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--periods", sim.periods, "Number of windows");
    sim_cmd->add_option("--dt", sim.dt, "Window length in seconds");
    sim_cmd->add_option("--intensity", sim.intensity, "Attack rate multiplier");
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();

    IndicesArgs idx;
    CLI::App* idx_cmd = app.add_subcommand("indices", "Compute per-window situation indices");
    idx_cmd->add_option("--inventory", idx.inventory, "Inventory JSON")->required();
    idx_cmd->add_option("--events", idx.events, "Event log (JSON Lines)")->required();
    idx_cmd->add_option("--dt", idx.dt, "Window length in seconds");
    idx_cmd->add_option("--horizon", idx.horizon, "Horizon in seconds (default: derived)");
    idx_cmd->add_option("--eta-min", idx.eta_min, "Correction factor at zero degradation");
    idx_cmd->add_option("--eta-max", idx.eta_max, "Correction factor at full degradation");
    idx_cmd->add_option("--out", idx.out, "Output directory")->required();

    DatasetArgs ds;
    CLI::App* ds_cmd = app.add_subcommand("dataset", "Build a labeled training dataset");
    ds_cmd->add_option("--seed", ds.seed, "Master seed");
    ds_cmd->add_option("--hosts", ds.hosts, "Host count")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--services", ds.services, "Services per host")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--periods", ds.periods, "Windows per scenario replica");
    ds_cmd->add_option("--dt", ds.dt, "Window length in seconds");
    ds_cmd->add_option("--intensity", ds.intensity, "Attack rate multiplier");
    ds_cmd->add_option("--noise", ds.noise, "Feature noise sigma");
    ds_cmd->add_option("--samples", ds.samples, "Total sample count")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--train-count", ds.train_count, "Training split size (0 = no split)");
    ds_cmd->add_option("--out", ds.out, "Output directory")->required();

    TrainArgs tr;
    CLI::App* tr_cmd = app.add_subcommand("train", "Train the situation prediction network");
    tr_cmd->add_option("--train", tr.train, "Training dataset CSV")->required();
    tr_cmd->add_option("--norm", tr.norm, "Normalization sidecar (default: <train>.norm.json)");
    tr_cmd->add_option("--hidden", tr.hidden, "Hidden layer size")->check(CLI::PositiveNumber);
    tr_cmd->add_option("--seed", tr.seed, "Master seed");
    tr_cmd->add_option("--pop", tr.pop, "GA population size");
    tr_cmd->add_option("--generations", tr.generations, "GA generations");
    tr_cmd->add_option("--crossover", tr.crossover, "Crossover probability");
    tr_cmd->add_option("--mutation", tr.mutation, "Per-gene mutation probability");
    tr_cmd->add_option("--sigma", tr.sigma, "Mutation sigma");
    tr_cmd->add_option("--elitism", tr.elitism, "Elite count");
    tr_cmd->add_option("--gene-min", tr.gene_min, "Gene lower bound");
    tr_cmd->add_option("--gene-max", tr.gene_max, "Gene upper bound");
    tr_cmd->add_option("--init-min", tr.init_min, "Init lower bound");
    tr_cmd->add_option("--init-max", tr.init_max, "Init upper bound");
    tr_cmd->add_option("--target", tr.target, "Early-stop fitness target (0 = off)");
    tr_cmd->add_option("--epochs", tr.epochs, "Fine-tune epochs");
    tr_cmd->add_option("--lr", tr.lr, "Learning rate");
    tr_cmd->add_option("--batch", tr.batch, "Mini-batch size");
    tr_cmd->add_option("--threads", tr.threads, "Fitness evaluation threads");
    tr_cmd->add_flag("--no-ga", tr.no_ga, "Plain backprop baseline (skip the GA)");
    tr_cmd->add_option("--out", tr.out, "Output directory")->required();

    EvaluateArgs ev;
    CLI::App* ev_cmd = app.add_subcommand("evaluate", "Evaluate a model on a test dataset");
    ev_cmd->add_option("--model", ev.model, "Model JSON")->required();
    ev_cmd->add_option("--test", ev.test, "Test dataset CSV")->required();
    ev_cmd->add_option("--out", ev.out, "Output directory")->required();

    PredictArgs pr;
    CLI::App* pr_cmd = app.add_subcommand("predict", "Predict situation values for feature rows");
    pr_cmd->add_option("--model", pr.model, "Model JSON")->required();
    pr_cmd->add_option("--values", pr.values, "Comma-separated feature row (repeatable)");
    pr_cmd->add_option("--features", pr.features, "Feature CSV (header f1..fN[,y])");
    pr_cmd->add_option("--out", pr.out, "Optional output directory for predictions.csv");

    RegimesArgs rg;
    CLI::App* rg_cmd = app.add_subcommand("regimes", "Emit the two fixed reference regimes");
    rg_cmd->add_option("--out", rg.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) run_simulate(sim);
        else if (idx_cmd->parsed()) run_indices(idx);
        else if (ds_cmd->parsed()) run_dataset(ds);
        else if (tr_cmd->parsed()) run_train(tr);
        else if (ev_cmd->parsed()) run_evaluate(ev);
        else if (pr_cmd->parsed()) run_predict(pr);
        else if (rg_cmd->parsed()) run_regimes(rg);
        else {
            std::cerr << app.help();
            return 2;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
