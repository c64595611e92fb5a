#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridssq/errors.hpp"

namespace gridssq {

// A monitored service running on a host. `si` is the service importance
// assigned by operations staff; any positive scale works, weights are
// normalized downstream.
struct ServiceSpec {
    std::string service_id;
    double si = 1.0;

    bool operator==(const ServiceSpec&) const = default;
};

// A host in the monitored network. `hi` is the host importance and
// `perf_degradation` the observed performance loss in [0, 1] (0 none,
// 1 fully degraded).
struct HostSpec {
    std::string host_id;
    double hi = 1.0;
    double perf_degradation = 0.0;
    std::vector<ServiceSpec> services;

    bool operator==(const HostSpec&) const = default;
};

struct NetworkInventory {
    std::vector<HostSpec> hosts;

    bool operator==(const NetworkInventory&) const = default;
};

// One detected attack record from the sensor stream. `t` is seconds since
// the start of the observation horizon; `severity` is the attack grade,
// at least 1.
struct AttackEvent {
    double t = 0.0;
    std::string host_id;
    std::string service_id;
    std::string attack_type;
    double severity = 1.0;

    bool operator==(const AttackEvent&) const = default;
};

// Per attack-type aggregate within one window: how many times it fired
// against a target and the worst grade seen.
struct AttackStat {
    std::uint64_t count = 0;
    double severity = 0.0;

    bool operator==(const AttackStat&) const = default;
};

using TargetKey = std::pair<std::string, std::string>;  // (host_id, service_id)
using TargetStats = std::map<std::string, AttackStat>;  // attack_type -> stat

// All events that fell into one evaluation period, grouped by target.
struct AttackWindow {
    std::size_t window_index = 0;
    double start = 0.0;
    double length = 0.0;
    std::map<TargetKey, TargetStats> targets;

    std::uint64_t total_events() const {
        std::uint64_t n = 0;
        for (const auto& [key, stats] : targets)
            for (const auto& [type, stat] : stats) n += stat.count;
        return n;
    }

    bool operator==(const AttackWindow&) const = default;
};

// Situation indices for one window, aligned with inventory order:
// host_tr[k] and host_rh[k] belong to hosts[k], service_rs[k][j] to
// hosts[k].services[j].
struct SituationRecord {
    std::size_t window_index = 0;
    double r_lq = 0.0;
    std::vector<double> host_tr;
    std::vector<double> host_rh;
    std::vector<std::vector<double>> service_rs;
};

inline void validate_inventory(const NetworkInventory& inv) {
    if (inv.hosts.empty())
        throw Error(ErrorKind::EmptyInventory, "inventory has no hosts");
    std::set<std::string> host_ids;
    for (const auto& host : inv.hosts) {
        if (!host_ids.insert(host.host_id).second)
            throw Error(ErrorKind::DuplicateId, "duplicate host id \"" + host.host_id + "\"");
        if (!(host.hi > 0.0) || !std::isfinite(host.hi))
            throw Error(ErrorKind::NonPositiveImportance,
                        "host \"" + host.host_id + "\" has non-positive importance");
        if (!(host.perf_degradation >= 0.0) || !(host.perf_degradation <= 1.0))
            throw Error(ErrorKind::DegradationOutOfRange,
                        "host \"" + host.host_id + "\" degradation must lie in [0, 1]");
        if (host.services.empty())
            throw Error(ErrorKind::EmptyInventory,
                        "host \"" + host.host_id + "\" has no services");
        std::set<std::string> service_ids;
        for (const auto& svc : host.services) {
            if (!service_ids.insert(svc.service_id).second)
                throw Error(ErrorKind::DuplicateId,
                            "duplicate service id \"" + svc.service_id +
                                "\" on host \"" + host.host_id + "\"");
            if (!(svc.si > 0.0) || !std::isfinite(svc.si))
                throw Error(ErrorKind::NonPositiveImportance,
                            "service \"" + svc.service_id + "\" on host \"" +
                                host.host_id + "\" has non-positive importance");
        }
    }
}

// Partitions [0, horizon) into ceil(horizon / window_seconds) consecutive
// windows and aggregates events per (target, attack type). Within a window
// the per-type count accumulates and the severity keeps the maximum.
inline std::vector<AttackWindow> window_events(const std::vector<AttackEvent>& events,
                                               double window_seconds,
                                               double horizon_seconds) {
    if (!(window_seconds > 0.0) || !std::isfinite(window_seconds))
        throw Error(ErrorKind::NonPositiveWindow, "window length must be positive");
    if (!(horizon_seconds >= 0.0) || !std::isfinite(horizon_seconds))
        throw Error(ErrorKind::ConfigInvalid, "horizon must be non-negative");

    const std::size_t window_count =
        static_cast<std::size_t>(std::ceil(horizon_seconds / window_seconds));
    std::vector<AttackWindow> windows(window_count);
    for (std::size_t w = 0; w < window_count; ++w) {
        windows[w].window_index = w;
        windows[w].start = static_cast<double>(w) * window_seconds;
        windows[w].length = window_seconds;
    }

    for (const auto& ev : events) {
        if (!(ev.t >= 0.0) || !(ev.t < horizon_seconds))
            throw Error(ErrorKind::TimestampOutOfHorizon,
                        "event at t=" + std::to_string(ev.t) + " outside [0, " +
                            std::to_string(horizon_seconds) + ")");
        std::size_t w = static_cast<std::size_t>(ev.t / window_seconds);
        if (w >= window_count) w = window_count - 1;  // guards t just below horizon
        AttackStat& stat = windows[w].targets[{ev.host_id, ev.service_id}][ev.attack_type];
        stat.count += 1;
        stat.severity = std::max(stat.severity, ev.severity);
    }
    return windows;
}

}  // namespace gridssq
