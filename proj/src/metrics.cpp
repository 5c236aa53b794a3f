#include "ggr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "ggr/errors.hpp"
#include "ggr/rng.hpp"

namespace ggr {

PairEnsemble all_pairs(const Topology& t) {
    const auto ids = t.present_ids();
    if (ids.size() < 2)
        fail(Errc::too_few_nodes, "pair ensemble needs at least 2 present nodes");
    PairEnsemble out;
    out.pairs.reserve(ids.size() * (ids.size() - 1));
    for (int s : ids)
        for (int d : ids)
            if (s != d)
                out.pairs.emplace_back(s, d);
    return out;
}

PairEnsemble sampled_pairs(const Topology& t, size_t count, uint64_t seed) {
    const auto ids = t.present_ids();
    if (ids.size() < 2)
        fail(Errc::too_few_nodes, "pair ensemble needs at least 2 present nodes");
    const size_t n = ids.size();
    const size_t universe = n * (n - 1);

    PairEnsemble out;
    out.sampled = true;
    out.seed = seed;
    if (count >= universe) {
        // Clamp to all ordered pairs; the actually evaluated count is
        // recorded by whoever reports on this ensemble.
        out.clamped = count > universe;
        out.pairs = all_pairs(t).pairs;
        return out;
    }

    // Floyd's sampling over the implicit pair index space [0, n(n-1)).
    Rng rng(seed);
    std::unordered_set<uint64_t> chosen;
    chosen.reserve(count * 2);
    out.pairs.reserve(count);
    for (uint64_t j = universe - count; j < universe; ++j) {
        uint64_t r = rng.next_below(j + 1);
        if (!chosen.insert(r).second) {
            r = j;
            chosen.insert(r);
        }
        const size_t si = static_cast<size_t>(r / (n - 1));
        const size_t rem = static_cast<size_t>(r % (n - 1));
        const size_t di = rem < si ? rem : rem + 1;
        out.pairs.emplace_back(ids[si], ids[di]);
    }
    return out;
}

double nearest_rank_percentile(const std::vector<double>& sorted_values, double pct) {
    if (sorted_values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const size_t n = sorted_values.size();
    size_t rank = static_cast<size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
    rank = std::min(std::max<size_t>(rank, 1), n);
    return sorted_values[rank - 1];
}

namespace {

void finalize_percentiles(MetricsReport& r) {
    std::sort(r.ods_samples.begin(), r.ods_samples.end());
    std::sort(r.uds_samples.begin(), r.uds_samples.end());
    r.ods_p50 = nearest_rank_percentile(r.ods_samples, 50.0);
    r.ods_p95 = nearest_rank_percentile(r.ods_samples, 95.0);
    r.uds_p50 = nearest_rank_percentile(r.uds_samples, 50.0);
    r.uds_p95 = nearest_rank_percentile(r.uds_samples, 95.0);
}

} // namespace

MetricsReport evaluate(const Topology& t, const PairEnsemble& ensemble, const GreedyOptions& opts,
                       const DelayModel& dm) {
    if (ensemble.pairs.empty())
        fail(Errc::empty_ensemble, "pair ensemble is empty");

    // Group pair indices by source so each source needs one Dijkstra run.
    // Per-pair work is read-only on the snapshot; the reduce below walks
    // sources in ascending order, so results never depend on scheduling.
    std::vector<std::pair<int, size_t>> by_src;
    by_src.reserve(ensemble.pairs.size());
    for (size_t i = 0; i < ensemble.pairs.size(); ++i)
        by_src.emplace_back(ensemble.pairs[i].first, i);
    std::stable_sort(by_src.begin(), by_src.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    DelayGraph dg(t, dm);
    GreedyRouter router(t, opts, dm);
    std::vector<double> dist;

    MetricsReport rep;
    rep.scheme = scheme_name(t.scheme());
    rep.n = t.node_count();
    rep.seed = ensemble.seed;
    rep.pairs_evaluated = ensemble.pairs.size();

    size_t successes = 0, disconnected = 0;
    constexpr double inf = std::numeric_limits<double>::infinity();

    size_t i = 0;
    while (i < by_src.size()) {
        const int src = by_src[i].first;
        dg.shortest_delays(src, dist);
        for (; i < by_src.size() && by_src[i].first == src; ++i) {
            const int dst = ensemble.pairs[by_src[i].second].second;
            if (dist[dst] == inf) {
                ++disconnected;
                continue;
            }
            const auto brief = router.route_brief(src, dst);
            if (!brief.success)
                continue;
            ++successes;
            rep.ods_samples.push_back(brief.delay_ms / dist[dst]);
            rep.uds_samples.push_back(brief.delay_ms / underlay_delay(t, src, dst, dm));
        }
    }

    rep.connected_pairs = rep.pairs_evaluated - disconnected;
    rep.disconnected_fraction =
        static_cast<double>(disconnected) / static_cast<double>(rep.pairs_evaluated);
    rep.sr = rep.connected_pairs == 0
                 ? 1.0 // vacuous: no routable pair failed
                 : static_cast<double>(successes) / static_cast<double>(rep.connected_pairs);
    finalize_percentiles(rep);
    return rep;
}

MetricsReport aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty())
        fail(Errc::empty_ensemble, "nothing to aggregate");
    if (reports.size() == 1)
        return reports.front();

    MetricsReport out = reports.front();
    out.ods_samples.clear();
    out.uds_samples.clear();
    out.trials = 0;
    out.pairs_evaluated = 0;
    out.connected_pairs = 0;

    double sr_sum = 0.0, disc_sum = 0.0;
    for (const MetricsReport& r : reports) {
        if (r.scheme != out.scheme || r.n != out.n)
            fail(Errc::mixed_schemes, "aggregate over mismatched scheme or size");
        sr_sum += r.sr;
        disc_sum += r.disconnected_fraction;
        out.trials += r.trials;
        out.pairs_evaluated += r.pairs_evaluated;
        out.connected_pairs += r.connected_pairs;
        out.ods_samples.insert(out.ods_samples.end(), r.ods_samples.begin(), r.ods_samples.end());
        out.uds_samples.insert(out.uds_samples.end(), r.uds_samples.begin(), r.uds_samples.end());
    }
    out.sr = sr_sum / static_cast<double>(reports.size());
    out.disconnected_fraction = disc_sum / static_cast<double>(reports.size());
    finalize_percentiles(out);
    return out;
}

} // namespace ggr
