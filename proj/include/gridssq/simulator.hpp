#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridssq/domain.hpp"
#include "gridssq/errors.hpp"
#include "gridssq/indices.hpp"
#include "gridssq/neural.hpp"
#include "gridssq/rng.hpp"

namespace gridssq {

// Severity grade and expected events per window per target for one attack
// type. Severities span [1, 2.5] so the 100^(D-1) term in the reliability
// index covers several orders of magnitude; rates fall with severity the way
// noisy scans outnumber real DoS attempts.
struct AttackProfile {
    double severity = 1.0;
    double base_rate = 0.0;
};

struct AttackCatalog {
    std::map<std::string, AttackProfile> attacks;

    static AttackCatalog defaults() {
        AttackCatalog cat;
        cat.attacks["server_scan"] = {1.0, 0.6};
        cat.attacks["ping_of_death"] = {1.8, 0.2};
        cat.attacks["dos"] = {2.5, 0.08};
        return cat;
    }
};

inline void validate_catalog(const AttackCatalog& catalog) {
    if (catalog.attacks.empty())
        throw Error(ErrorKind::ConfigInvalid, "attack catalog is empty");
    for (const auto& [type, profile] : catalog.attacks) {
        if (!(profile.severity >= 1.0))
            throw Error(ErrorKind::ConfigInvalid, "attack \"" + type + "\" severity must be >= 1");
        if (!(profile.base_rate >= 0.0))
            throw Error(ErrorKind::ConfigInvalid, "attack \"" + type + "\" rate must be >= 0");
    }
}

// How attack volume is distributed across a host's services.
enum class TargetingMode {
    uniform,           // every service equally likely
    focus_important,   // volume concentrated on high-importance services
    avoid_important,   // volume concentrated on low-importance services
};

// Default scale: one host running the three business services. With a single
// host the feature aggregates determine the situation value exactly, so the
// default dataset is cleanly learnable; larger networks are a flag away.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t hosts = 1;
    std::size_t services_per_host = 3;
    std::size_t periods = 10;
    double window_seconds = 60.0;
    AttackCatalog catalog = AttackCatalog::defaults();
    double intensity = 1.0;
    double feature_noise_sigma = 0.0;
    double degradation_min = 0.0;
    double degradation_max = 0.5;
    TargetingMode targeting = TargetingMode::uniform;

    double horizon() const { return static_cast<double>(periods) * window_seconds; }
};

inline void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.hosts < 1 || cfg.services_per_host < 1)
        throw Error(ErrorKind::ConfigInvalid, "scenario needs at least one host and one service");
    if (cfg.periods < 1) throw Error(ErrorKind::ConfigInvalid, "periods must be at least 1");
    if (!(cfg.window_seconds > 0.0))
        throw Error(ErrorKind::ConfigInvalid, "window length must be positive");
    if (!(cfg.intensity >= 0.0)) throw Error(ErrorKind::ConfigInvalid, "intensity must be >= 0");
    if (!(cfg.feature_noise_sigma >= 0.0))
        throw Error(ErrorKind::ConfigInvalid, "feature noise sigma must be >= 0");
    if (!(cfg.degradation_min >= 0.0) || !(cfg.degradation_min <= cfg.degradation_max) ||
        !(cfg.degradation_max <= 1.0))
        throw Error(ErrorKind::ConfigInvalid, "degradation range must satisfy 0 <= min <= max <= 1");
    validate_catalog(cfg.catalog);
}

namespace detail {

// Per-service rate multipliers for one host. Normalized so each host keeps
// the same expected total volume under every targeting mode.
inline std::vector<double> targeting_multipliers(const HostSpec& host, TargetingMode mode) {
    const std::size_t count = host.services.size();
    std::vector<double> mult(count, 1.0);
    if (mode == TargetingMode::uniform) return mult;
    constexpr double gamma = 4.0;  // SI ratio of 2 shifts volume 16x
    double sum = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double si = host.services[j].si;
        mult[j] = mode == TargetingMode::focus_important ? std::pow(si, gamma)
                                                         : std::pow(si, -gamma);
        sum += mult[j];
    }
    for (double& m : mult) m *= static_cast<double>(count) / sum;
    return mult;
}

}  // namespace detail

// Event stream for one scenario replica. Replicas share the inventory;
// scenario_index selects an independent substream so datasets can loop
// fresh attack traffic over a fixed network.
inline std::vector<AttackEvent> generate_events(const NetworkInventory& inv,
                                                const ScenarioConfig& cfg,
                                                std::uint64_t scenario_index) {
    validate_scenario(cfg);
    Rng rng(derive_seed(cfg.seed, stream::events, scenario_index));
    std::vector<AttackEvent> events;
    for (std::size_t w = 0; w < cfg.periods; ++w) {
        const double start = static_cast<double>(w) * cfg.window_seconds;
        for (const auto& host : inv.hosts) {
            const std::vector<double> mult = detail::targeting_multipliers(host, cfg.targeting);
            for (std::size_t j = 0; j < host.services.size(); ++j) {
                for (const auto& [type, profile] : cfg.catalog.attacks) {
                    const double mean = profile.base_rate * cfg.intensity * mult[j];
                    const std::uint64_t count = rng.poisson(mean);
                    for (std::uint64_t e = 0; e < count; ++e) {
                        AttackEvent ev;
                        ev.t = start + rng.uniform01() * cfg.window_seconds;
                        ev.host_id = host.host_id;
                        ev.service_id = host.services[j].service_id;
                        ev.attack_type = type;
                        ev.severity = profile.severity;
                        events.push_back(std::move(ev));
                    }
                }
            }
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const AttackEvent& a, const AttackEvent& b) { return a.t < b.t; });
    return events;
}

struct ScenarioData {
    NetworkInventory inventory;
    std::vector<AttackEvent> events;
};

// Synthesizes a network (importances uniform on [1, 5], degradation uniform
// on the configured range) plus one horizon of attack traffic.
inline ScenarioData generate_scenario(const ScenarioConfig& cfg) {
    validate_scenario(cfg);
    ScenarioData data;
    Rng rng(derive_seed(cfg.seed, stream::inventory));
    for (std::size_t h = 0; h < cfg.hosts; ++h) {
        HostSpec host;
        host.host_id = "h" + std::to_string(h + 1);
        host.hi = rng.uniform(1.0, 5.0);
        host.perf_degradation = rng.uniform(cfg.degradation_min, cfg.degradation_max);
        for (std::size_t s = 0; s < cfg.services_per_host; ++s) {
            ServiceSpec svc;
            svc.service_id = "s" + std::to_string(s + 1);
            svc.si = rng.uniform(1.0, 5.0);
            host.services.push_back(std::move(svc));
        }
        data.inventory.hosts.push_back(std::move(host));
    }
    validate_inventory(data.inventory);
    data.events = generate_events(data.inventory, cfg, 0);
    return data;
}

namespace detail {

inline std::vector<double> features_from(const AttackWindow& window, const SituationRecord& rec,
                                         const NetworkInventory& inv) {
    double total_count = 0.0;
    double severity_mass = 0.0;
    double max_severity = 0.0;
    std::set<std::string> types;
    for (const auto& [key, stats] : window.targets) {
        for (const auto& [type, stat] : stats) {
            types.insert(type);
            total_count += static_cast<double>(stat.count);
            severity_mass += static_cast<double>(stat.count) * stat.severity;
            max_severity = std::max(max_severity, stat.severity);
        }
    }

    double attacked_rs_sum = 0.0;
    std::size_t attacked = 0;
    double max_rs = 0.0;
    for (std::size_t h = 0; h < inv.hosts.size(); ++h) {
        for (std::size_t j = 0; j < inv.hosts[h].services.size(); ++j) {
            const double rs = rec.service_rs[h][j];
            max_rs = std::max(max_rs, rs);
            const TargetKey key{inv.hosts[h].host_id, inv.hosts[h].services[j].service_id};
            auto it = window.targets.find(key);
            if (it != window.targets.end() && !it->second.empty()) {
                attacked_rs_sum += rs;
                ++attacked;
            }
        }
    }

    const double mean_tr =
        std::accumulate(rec.host_tr.begin(), rec.host_tr.end(), 0.0) /
        static_cast<double>(rec.host_tr.size());
    const double max_rh = *std::max_element(rec.host_rh.begin(), rec.host_rh.end());

    return {
        total_count,
        static_cast<double>(types.size()),
        max_severity,
        total_count > 0.0 ? severity_mass / total_count : 0.0,
        attacked > 0 ? attacked_rs_sum / static_cast<double>(attacked) : 0.0,
        max_rs,
        mean_tr,
        max_rh,
    };
}

}  // namespace detail

// Fixed 8-entry feature recipe, covering raw attack statistics (f1-f4) and
// the three index dimensions (f5-f8):
//   f1 total events, f2 distinct attack types, f3 max severity,
//   f4 count-weighted mean severity, f5 mean reliability over attacked
//   services, f6 max reliability, f7 mean host vulnerability,
//   f8 max corrected host index.
// The order is part of the model-file contract.
inline std::vector<double> extract_features(const NetworkInventory& inv, const AttackWindow& window,
                                            const CorrectionPolicy& policy = {}) {
    return detail::features_from(window, compute_situation(inv, window, policy), inv);
}

inline constexpr std::size_t feature_count = 8;

struct DatasetBuild {
    std::vector<Sample> samples;
    NormalizationMeta meta;
};

// Builds `count` labeled samples over a fixed inventory. The provided event
// stream covers replica 0; further replicas draw fresh traffic from derived
// substreams until the count is met. Features may carry additive Gaussian
// noise; labels always come from the noise-free index pipeline and are
// min-max normalized to [0, 1] at the end, with the fitted ranges returned.
inline DatasetBuild build_dataset(const NetworkInventory& inv,
                                  const std::vector<AttackEvent>& events,
                                  const ScenarioConfig& cfg, std::size_t count) {
    validate_scenario(cfg);
    validate_inventory(inv);
    if (count < 1) throw Error(ErrorKind::ConfigInvalid, "sample count must be at least 1");

    const CorrectionPolicy policy{};
    Rng noise_rng(derive_seed(cfg.seed, stream::noise));

    DatasetBuild build;
    build.samples.reserve(count);
    std::uint64_t scenario_index = 0;
    while (build.samples.size() < count) {
        const std::vector<AttackEvent> replica =
            scenario_index == 0 ? events : generate_events(inv, cfg, scenario_index);
        const std::vector<AttackWindow> windows =
            window_events(replica, cfg.window_seconds, cfg.horizon());
        for (const auto& window : windows) {
            if (build.samples.size() >= count) break;
            const SituationRecord rec = compute_situation(inv, window, policy);
            std::vector<double> feats = detail::features_from(window, rec, inv);
            if (cfg.feature_noise_sigma > 0.0)
                for (double& f : feats) f += noise_rng.normal(0.0, cfg.feature_noise_sigma);
            build.samples.push_back({std::move(feats), {rec.r_lq}});
        }
        ++scenario_index;
    }

    build.meta = fit_normalization(build.samples);
    for (auto& s : build.samples) s.y = normalize_labels(build.meta, s.y);
    return build;
}

// Uniform random partition without replacement into (train, test).
inline std::pair<std::vector<Sample>, std::vector<Sample>> split_dataset(
    const std::vector<Sample>& samples, std::size_t train_count, std::uint64_t seed) {
    if (train_count > samples.size())
        throw Error(ErrorKind::CountExceedsDataset,
                    "requested " + std::to_string(train_count) + " training samples from " +
                        std::to_string(samples.size()));
    std::vector<std::size_t> idx(samples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(derive_seed(seed, stream::split));
    shuffle(idx, rng);
    std::pair<std::vector<Sample>, std::vector<Sample>> out;
    out.first.reserve(train_count);
    out.second.reserve(samples.size() - train_count);
    for (std::size_t i = 0; i < idx.size(); ++i)
        (i < train_count ? out.first : out.second).push_back(samples[idx[i]]);
    return out;
}

struct RegimeScenarios {
    ScenarioConfig correlated;  // high threat and high vulnerability
    ScenarioConfig resilient;   // high threat, low vulnerability
};

// Two fixed reference scenarios at matched attack intensity. The correlated
// regime concentrates traffic on each host's most important services and
// degrades host performance; the resilient regime spreads the same volume
// over unimportant services of healthy hosts. Seeds are embedded so the
// contrast is reproducible.
inline RegimeScenarios regime_scenarios() {
    RegimeScenarios r;
    r.correlated.seed = 9101;
    r.correlated.hosts = 4;
    r.correlated.services_per_host = 3;
    r.correlated.degradation_min = 0.6;
    r.correlated.degradation_max = 0.9;
    r.correlated.targeting = TargetingMode::focus_important;

    r.resilient.seed = 9102;
    r.resilient.hosts = 4;
    r.resilient.services_per_host = 3;
    r.resilient.degradation_min = 0.0;
    r.resilient.degradation_max = 0.0;
    r.resilient.targeting = TargetingMode::avoid_important;
    return r;
}

}  // namespace gridssq
