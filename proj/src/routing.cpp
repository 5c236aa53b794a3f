#include "ggr/routing.hpp"

#include <limits>
#include <queue>

#include "ggr/errors.hpp"

namespace ggr {

namespace {

void require_present(const Topology& t, int id) {
    if (!t.present(id))
        fail(Errc::no_such_node, "no present node " + std::to_string(id));
}

} // namespace

GreedyRouter::GreedyRouter(const Topology& t, const GreedyOptions& opts, const DelayModel& dm)
    : topo_(t), opts_(opts), dm_(dm), visit_mark_(t.node_count(), 0) {}

GreedyRouter::Brief GreedyRouter::walk(int src, int dst, std::vector<int>* path) {
    require_present(topo_, src);
    require_present(topo_, dst);

    Brief out;
    if (path) {
        path->clear();
        path->push_back(src);
    }
    if (src == dst) { // degenerate, not produced by pair ensembles
        out.success = true;
        return out;
    }

    const int hop_limit = opts_.hop_limit > 0 ? opts_.hop_limit : topo_.node_count();
    const auto probe = topo_.coords().make_probe(topo_.address(dst));

    ++epoch_;
    visit_mark_[src] = epoch_;
    int cur = src;
    double cur_key = topo_.coords().key_of(src, probe);
    double delay = 0.0;

    for (;;) {
        const auto& nbrs = topo_.neighbors(cur);
        if (nbrs.empty()) {
            out.reason = FailureReason::local_minimum;
            return out;
        }
        // Adjacency is sorted ascending, so strict less keeps the smallest id
        // among equally close neighbors.
        int best = -1;
        double best_key = 0.0;
        for (int w : nbrs) {
            const double k = topo_.coords().key_of(w, probe);
            if (best < 0 || k < best_key) {
                best = w;
                best_key = k;
            }
        }
        if (opts_.strict_progress && !(best_key < cur_key)) {
            out.reason = FailureReason::local_minimum;
            return out;
        }
        delay += link_delay_ms(topo_.address(cur).angular(), topo_.address(best).angular(), dm_);
        ++out.hops;
        if (best == dst) {
            if (path)
                path->push_back(best);
            out.success = true;
            out.delay_ms = delay;
            return out;
        }
        if (visit_mark_[best] == epoch_) {
            out.reason = FailureReason::local_minimum;
            return out;
        }
        visit_mark_[best] = epoch_;
        if (path)
            path->push_back(best);
        cur = best;
        cur_key = best_key;
        if (out.hops >= hop_limit) { // defect containment; unreachable by the visited-set rule
            out.reason = FailureReason::hop_limit;
            return out;
        }
    }
}

RouteResult GreedyRouter::route(int src, int dst) {
    RouteResult res;
    const Brief b = walk(src, dst, &res.path);
    res.success = b.success;
    res.reason = b.reason;
    res.delay_ms = b.delay_ms;
    return res;
}

RouteResult greedy_route(const Topology& t, int src, int dst, const GreedyOptions& opts,
                         const DelayModel& dm) {
    GreedyRouter router(t, opts, dm);
    return router.route(src, dst);
}

DelayGraph::DelayGraph(const Topology& t, const DelayModel& dm) : topo_(t) {
    delay_.resize(t.node_count());
    for (int i = 0; i < t.node_count(); ++i) {
        const auto& nbrs = t.neighbors(i);
        delay_[i].reserve(nbrs.size());
        for (int j : nbrs)
            delay_[i].push_back(link_delay_ms(t.address(i).angular(), t.address(j).angular(), dm));
    }
}

void DelayGraph::shortest_delays(int src, std::vector<double>& dist) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int n = topo_.node_count();
    dist.assign(n, inf);
    dist[src] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u])
            continue;
        const auto& nbrs = topo_.neighbors(u);
        const auto& w = delay_[u];
        for (size_t k = 0; k < nbrs.size(); ++k) {
            const double nd = d + w[k];
            if (nd < dist[nbrs[k]]) {
                dist[nbrs[k]] = nd;
                heap.emplace(nd, nbrs[k]);
            }
        }
    }
}

std::optional<double> shortest_delay_path(const Topology& t, int src, int dst,
                                          const DelayModel& dm) {
    require_present(t, src);
    require_present(t, dst);
    DelayGraph dg(t, dm);
    std::vector<double> dist;
    dg.shortest_delays(src, dist);
    if (dist[dst] == std::numeric_limits<double>::infinity())
        return std::nullopt;
    return dist[dst];
}

double underlay_delay(const Topology& t, int src, int dst, const DelayModel& dm) {
    require_present(t, src);
    require_present(t, dst);
    return link_delay_ms(t.address(src).angular(), t.address(dst).angular(), dm);
}

} // namespace ggr
