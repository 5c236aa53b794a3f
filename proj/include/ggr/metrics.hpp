#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ggr/routing.hpp"
#include "ggr/topology.hpp"

namespace ggr {

/// Ordered source-destination pairs over the present nodes of a topology.
struct PairEnsemble {
    std::vector<std::pair<int, int>> pairs;
    bool sampled = false;
    uint64_t seed = 0;
    bool clamped = false; // sampled count exceeded n(n-1) and was clamped
};

PairEnsemble all_pairs(const Topology& t);
PairEnsemble sampled_pairs(const Topology& t, size_t count, uint64_t seed);

/// Per-(scheme, size, scenario) record of SR and delay-stretch percentiles.
/// The raw per-pair stretch samples ride along (sorted ascending) so that
/// aggregation across trials can pool them.
struct MetricsReport {
    std::string scheme;
    int n = 0; // network size at the checkpoint (tombstones included)
    std::string scenario = "original";
    int trials = 1;
    size_t pairs_evaluated = 0; // ordered pairs attempted
    size_t connected_pairs = 0; // SR denominator
    double disconnected_fraction = 0.0;
    double sr = 1.0;
    double ods_p50 = 0.0, ods_p95 = 0.0;
    double uds_p50 = 0.0, uds_p95 = 0.0;
    uint64_t seed = 0;
    std::vector<double> ods_samples, uds_samples;
};

/// Nearest-rank percentile of a sorted ascending sample list; NaN when empty.
double nearest_rank_percentile(const std::vector<double>& sorted_values, double pct);

/// Run greedy routing over every pair.  Pairs with no path in the (possibly
/// damaged) graph are excluded from the SR denominator and reported via
/// disconnected_fraction; stretches are computed over successful pairs only.
MetricsReport evaluate(const Topology& t, const PairEnsemble& ensemble,
                       const GreedyOptions& opts = {}, const DelayModel& dm = {});

/// Combine per-trial reports of one (scheme, size) cell: SR is the unweighted
/// mean, stretch percentiles are recomputed on the pooled per-pair samples.
MetricsReport aggregate(const std::vector<MetricsReport>& reports);

} // namespace ggr
