#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gridssq/domain.hpp"
#include "gridssq/errors.hpp"

namespace gridssq {

// Maps a host's performance degradation to the threat correction factor.
// Affine on [0, 1]: a healthy host gets eta_min, a fully degraded one
// eta_max. With the defaults the correction never attenuates (eta >= 1),
// so a corrected host index is never below the raw vulnerability index.
struct CorrectionPolicy {
    double eta_min = 1.0;
    double eta_max = 2.0;
};

inline void validate_policy(const CorrectionPolicy& policy) {
    if (!(policy.eta_min > 0.0) || !(policy.eta_min <= policy.eta_max))
        throw Error(ErrorKind::ConfigInvalid, "correction policy requires 0 < eta_min <= eta_max");
}

// Sum-normalizes positive importance values into convex-combination weights.
inline std::vector<double> normalize_importance(const std::vector<double>& raw) {
    if (raw.empty()) throw Error(ErrorKind::EmptyInput, "cannot normalize an empty importance list");
    double sum = 0.0;
    for (double v : raw) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::NonPositiveEntry, "importance entries must be positive");
        sum += v;
    }
    std::vector<double> weights(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) weights[i] = raw[i] / sum;
    return weights;
}

// Per-service reliability index over one window: sum of C * 100^(D-1) across
// attack types. The exponential term amplifies severe attacks: one grade of
// severity is worth a hundredfold of frequency.
inline double reliability_index(const TargetStats& stats) {
    double total = 0.0;
    for (const auto& [type, stat] : stats) {
        if (stat.count < 1)
            throw Error(ErrorKind::ZeroCount, "attack type \"" + type + "\" has zero count");
        if (!(stat.severity >= 1.0))
            throw Error(ErrorKind::SeverityBelowOne, "attack type \"" + type + "\" has severity below 1");
        total += static_cast<double>(stat.count) * std::pow(100.0, stat.severity - 1.0);
    }
    return total;
}

namespace detail {

inline double convex_combination(const std::vector<double>& weights,
                                 const std::vector<double>& values,
                                 const char* what) {
    if (weights.empty() || values.empty())
        throw Error(ErrorKind::EmptyInput, std::string(what) + ": empty input");
    if (weights.size() != values.size())
        throw Error(ErrorKind::LengthMismatch, std::string(what) + ": weight/value length mismatch");
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorKind::WeightsNotNormalized, std::string(what) + ": weights must sum to 1");
    double out = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) out += weights[i] * values[i];
    return out;
}

}  // namespace detail

// Host vulnerability index: importance-weighted average of the host's
// per-service reliability indices.
inline double vulnerability_index(const std::vector<double>& service_weights,
                                  const std::vector<double>& service_indices) {
    return detail::convex_combination(service_weights, service_indices, "vulnerability_index");
}

inline double correction_factor(double perf_degradation, const CorrectionPolicy& policy = {}) {
    validate_policy(policy);
    if (!(perf_degradation >= 0.0) || !(perf_degradation <= 1.0))
        throw Error(ErrorKind::DegradationOutOfRange, "degradation must lie in [0, 1]");
    return policy.eta_min + perf_degradation * (policy.eta_max - policy.eta_min);
}

inline double corrected_host_index(double tr, double eta) {
    if (!(eta > 0.0))
        throw Error(ErrorKind::NonPositiveEta, "correction factor must be positive");
    return eta * tr;
}

// Network threat index: importance-weighted average of corrected host indices.
inline double threat_index(const std::vector<double>& host_weights,
                           const std::vector<double>& corrected_indices) {
    return detail::convex_combination(host_weights, corrected_indices, "threat_index");
}

// Full index pipeline for one window. Unattacked services score 0 but keep
// their importance weight; weights are static properties of the inventory,
// recomputed identically for every window.
inline SituationRecord compute_situation(const NetworkInventory& inv,
                                         const AttackWindow& window,
                                         const CorrectionPolicy& policy = {}) {
    validate_policy(policy);

    std::map<TargetKey, const TargetStats*> lookup;
    for (const auto& host : inv.hosts)
        for (const auto& svc : host.services)
            lookup[{host.host_id, svc.service_id}] = nullptr;
    for (const auto& [key, stats] : window.targets) {
        auto it = lookup.find(key);
        if (it == lookup.end())
            throw Error(ErrorKind::UnknownEntity,
                        "window references unknown target (" + key.first + ", " + key.second + ")");
        it->second = &stats;
    }

    SituationRecord rec;
    rec.window_index = window.window_index;
    rec.host_tr.reserve(inv.hosts.size());
    rec.host_rh.reserve(inv.hosts.size());
    rec.service_rs.reserve(inv.hosts.size());

    std::vector<double> host_importance;
    host_importance.reserve(inv.hosts.size());
    for (const auto& host : inv.hosts) {
        std::vector<double> service_importance;
        std::vector<double> rs;
        service_importance.reserve(host.services.size());
        rs.reserve(host.services.size());
        for (const auto& svc : host.services) {
            service_importance.push_back(svc.si);
            const TargetStats* stats = lookup[{host.host_id, svc.service_id}];
            rs.push_back(stats ? reliability_index(*stats) : 0.0);
        }
        const double tr = vulnerability_index(normalize_importance(service_importance), rs);
        const double eta = correction_factor(host.perf_degradation, policy);
        rec.service_rs.push_back(std::move(rs));
        rec.host_tr.push_back(tr);
        rec.host_rh.push_back(corrected_host_index(tr, eta));
        host_importance.push_back(host.hi);
    }
    rec.r_lq = threat_index(normalize_importance(host_importance), rec.host_rh);
    return rec;
}

}  // namespace gridssq
