#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ggr/address.hpp"
#include "ggr/addressing.hpp"
#include "ggr/kernels.hpp"

namespace ggr {

/// Grown overlay graph.  Node ids are dense arrival indices; removed nodes
/// become tombstones (id preserved, marked absent, edges dropped) so that
/// failure-scenario metrics can keep referring to original ids.
class Topology {
public:
    explicit Topology(Scheme scheme)
        : scheme_(scheme), coords_(scheme != Scheme::geo) {}

    Scheme scheme() const { return scheme_; }

    int add_node(std::string zone_id, const Address& addr);
    void add_edge(int i, int j);    // set-insert; rejects self loops
    void remove_edge(int i, int j); // throws no_such_link
    void remove_node(int id);       // tombstone; throws no_such_node

    int node_count() const { return static_cast<int>(addrs_.size()); }
    int present_count() const { return present_count_; }
    bool present(int id) const { return id >= 0 && id < node_count() && present_[id]; }
    const std::vector<int>& neighbors(int id) const { return adj_[id]; }
    const Address& address(int id) const { return addrs_[id]; }
    const std::string& zone_id(int id) const { return zone_ids_[id]; }
    size_t edge_count() const { return edges_; }
    bool has_edge(int i, int j) const;

    /// All edges as (i, j) with i < j, lexicographically sorted.
    std::vector<std::pair<int, int>> edge_list() const;
    std::vector<int> present_ids() const;

    const kernels::CoordTable& coords() const { return coords_; }

private:
    Scheme scheme_;
    std::vector<std::string> zone_ids_;
    std::vector<Address> addrs_;
    std::vector<std::vector<int>> adj_;
    std::vector<char> present_;
    kernels::CoordTable coords_;
    size_t edges_ = 0;
    int present_count_ = 0;
};

/// Failure injection scenarios.
struct FailureScenario {
    enum class Kind { original, one_node, one_link, random_links };
    Kind kind = Kind::original;
    int node = -1;
    int link_i = -1, link_j = -1;
    double fraction = 0.0;
    uint64_t seed = 0;

    static FailureScenario original() { return {}; }
    static FailureScenario one_node(int id) {
        FailureScenario f;
        f.kind = Kind::one_node;
        f.node = id;
        return f;
    }
    static FailureScenario one_link(int i, int j) {
        FailureScenario f;
        f.kind = Kind::one_link;
        f.link_i = i;
        f.link_j = j;
        return f;
    }
    static FailureScenario random_links(double fraction, uint64_t seed) {
        FailureScenario f;
        f.kind = Kind::random_links;
        f.fraction = fraction;
        f.seed = seed;
        return f;
    }
};

/// Incremental growth by the coupled design scheme: every arriving node links
/// to the m existing nodes closest to it in the scheme metric (all of them
/// while fewer than m exist).
class GrowthEngine {
public:
    GrowthEngine(const SchemeConfig& cfg, const RankTable* ranks);

    void add(const Zone& zone);
    const Topology& topology() const { return topo_; }
    Topology snapshot() const { return topo_; }

private:
    SchemeConfig cfg_;
    const RankTable* ranks_;
    Topology topo_;
    std::vector<double> key_buf_;
};

Topology grow(const std::vector<Zone>& arrivals, const SchemeConfig& cfg, const RankTable* ranks);

/// The min(m, present) present nodes closest to target, sorted by distance,
/// ties by smaller node id.  Linear scan over the coordinate table (batched
/// through the kernel backends).
std::vector<int> nearest_existing(const Topology& t, const Address& target, int m);

/// Non-mutating failure application; returns a modified copy.
Topology apply_failure(const Topology& t, const FailureScenario& f);

/// One one_node scenario per present node (ascending id), then one one_link
/// per edge (lexicographic).
std::vector<FailureScenario> enumerate_single_failures(const Topology& t);

/// Consistency walk: symmetry, sorted adjacency, no self loops or duplicates,
/// tombstones have no incident edges, edge count matches.  Throws
/// std::logic_error on violation.
void validate(const Topology& t);

/// Text dump: "# scheme" header, node block "id zone_id r theta phi", then
/// edge lines "i j".  Round-trips through load_topology_dump.
void dump_topology(const Topology& t, std::ostream& out);
Topology load_topology_dump(std::istream& in);

} // namespace ggr
