#pragma once

#include <optional>
#include <vector>

#include "ggr/geometry.hpp"
#include "ggr/topology.hpp"

namespace ggr {

enum class FailureReason { none, local_minimum, disconnected, hop_limit };

struct RouteResult {
    bool success = false;
    FailureReason reason = FailureReason::none;
    std::vector<int> path; // visited nodes in order, starting at src
    double delay_ms = 0.0; // sum of per-hop link delays; successful routes only
};

struct GreedyOptions {
    /// Verbatim rule: always forward to the neighbor closest to the
    /// destination; fail on revisit.  strict_progress additionally fails as
    /// soon as the best neighbor is no closer than the current node.
    bool strict_progress = false;
    int hop_limit = 0; // 0 = node count; a safety net that must never trigger
};

/// Greedy geometric walk from src towards dst's address.  At every step the
/// packet moves to the neighbor with the smallest scheme-metric distance to
/// dst (ties by smaller node id); reaching an already-visited node is a local
/// minimum and a routing failure.
RouteResult greedy_route(const Topology& t, int src, int dst, const GreedyOptions& opts = {},
                         const DelayModel& dm = {});

/// Reusable greedy walker; keeps scratch buffers across calls so that pair
/// ensembles can be evaluated without per-route allocation.
class GreedyRouter {
public:
    GreedyRouter(const Topology& t, const GreedyOptions& opts = {}, const DelayModel& dm = {});

    struct Brief {
        bool success = false;
        FailureReason reason = FailureReason::none;
        double delay_ms = 0.0;
        int hops = 0;
    };
    Brief route_brief(int src, int dst) { return walk(src, dst, nullptr); }
    RouteResult route(int src, int dst);

private:
    Brief walk(int src, int dst, std::vector<int>* path);

    const Topology& topo_;
    GreedyOptions opts_;
    DelayModel dm_;
    std::vector<uint32_t> visit_mark_;
    uint32_t epoch_ = 0;
};

/// Per-edge delay view of a topology; precomputes link delays once so that
/// repeated shortest-path queries stay cheap.
class DelayGraph {
public:
    DelayGraph(const Topology& t, const DelayModel& dm = {});

    /// Dijkstra from src over link delays; dist[i] = infinity when i is
    /// unreachable or absent.
    void shortest_delays(int src, std::vector<double>& dist) const;

    const Topology& topology() const { return topo_; }

private:
    const Topology& topo_;
    std::vector<std::vector<double>> delay_; // aligned with neighbors(i)
};

/// Minimum summed link delay over all paths; nullopt when disconnected.
std::optional<double> shortest_delay_path(const Topology& t, int src, int dst,
                                          const DelayModel& dm = {});

/// Delay of a hypothetical direct link between the two nodes' geolocations.
double underlay_delay(const Topology& t, int src, int dst, const DelayModel& dm = {});

} // namespace ggr
