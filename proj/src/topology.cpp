#include "ggr/topology.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ggr/errors.hpp"
#include "ggr/rng.hpp"

namespace ggr {

int Topology::add_node(std::string zone_id, const Address& addr) {
    const int id = node_count();
    zone_ids_.push_back(std::move(zone_id));
    addrs_.push_back(addr);
    adj_.emplace_back();
    present_.push_back(1);
    coords_.push_back(addr);
    ++present_count_;
    return id;
}

void Topology::add_edge(int i, int j) {
    assert(present(i) && present(j));
    if (i == j)
        return;
    auto& ai = adj_[i];
    auto it = std::lower_bound(ai.begin(), ai.end(), j);
    if (it != ai.end() && *it == j)
        return; // duplicate suppressed
    ai.insert(it, j);
    auto& aj = adj_[j];
    aj.insert(std::lower_bound(aj.begin(), aj.end(), i), i);
    ++edges_;
}

bool Topology::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= node_count() || j >= node_count())
        return false;
    const auto& ai = adj_[i];
    return std::binary_search(ai.begin(), ai.end(), j);
}

void Topology::remove_edge(int i, int j) {
    if (!has_edge(i, j))
        fail(Errc::no_such_link, "no link " + std::to_string(i) + "-" + std::to_string(j));
    auto& ai = adj_[i];
    ai.erase(std::lower_bound(ai.begin(), ai.end(), j));
    auto& aj = adj_[j];
    aj.erase(std::lower_bound(aj.begin(), aj.end(), i));
    --edges_;
}

void Topology::remove_node(int id) {
    if (!present(id))
        fail(Errc::no_such_node, "no present node " + std::to_string(id));
    // Copy: remove_edge mutates adj_[id].
    const std::vector<int> nbrs = adj_[id];
    for (int w : nbrs)
        remove_edge(id, w);
    present_[id] = 0;
    --present_count_;
}

std::vector<std::pair<int, int>> Topology::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_);
    for (int i = 0; i < node_count(); ++i)
        for (int j : adj_[i])
            if (j > i)
                out.emplace_back(i, j);
    return out; // ascending i, then ascending j: already lexicographic
}

std::vector<int> Topology::present_ids() const {
    std::vector<int> out;
    out.reserve(present_count_);
    for (int i = 0; i < node_count(); ++i)
        if (present_[i])
            out.push_back(i);
    return out;
}

GrowthEngine::GrowthEngine(const SchemeConfig& cfg, const RankTable* ranks)
    : cfg_(cfg), ranks_(ranks), topo_(cfg.scheme) {}

void GrowthEngine::add(const Zone& zone) {
    const Address addr = address_of(zone, ranks_, cfg_);
    const int n = topo_.node_count();
    std::vector<int> targets;
    if (n > 0) {
        key_buf_.resize(n);
        const auto probe = topo_.coords().make_probe(addr);
        topo_.coords().distance_keys(probe, key_buf_.data());
        std::vector<std::pair<double, int>> cand;
        cand.reserve(n);
        for (int i = 0; i < n; ++i)
            if (topo_.present(i))
                cand.emplace_back(key_buf_[i], i);
        const size_t m = std::min<size_t>(cfg_.m, cand.size());
        if (m < cand.size())
            std::partial_sort(cand.begin(), cand.begin() + m, cand.end());
        else
            std::sort(cand.begin(), cand.end());
        for (size_t i = 0; i < m; ++i)
            targets.push_back(cand[i].second);
    }
    const int id = topo_.add_node(zone.zone_id, addr);
    for (int w : targets)
        topo_.add_edge(id, w);
}

Topology grow(const std::vector<Zone>& arrivals, const SchemeConfig& cfg, const RankTable* ranks) {
    GrowthEngine engine(cfg, ranks);
    for (const Zone& z : arrivals)
        engine.add(z);
    return engine.topology();
}

std::vector<int> nearest_existing(const Topology& t, const Address& target, int m) {
    const int n = t.node_count();
    std::vector<double> keys(n);
    const auto probe = t.coords().make_probe(target);
    t.coords().distance_keys(probe, keys.data());
    std::vector<std::pair<double, int>> cand;
    cand.reserve(t.present_count());
    for (int i = 0; i < n; ++i)
        if (t.present(i))
            cand.emplace_back(keys[i], i);
    const size_t k = std::min<size_t>(std::max(m, 0), cand.size());
    if (k < cand.size())
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    else
        std::sort(cand.begin(), cand.end());
    std::vector<int> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i)
        out.push_back(cand[i].second);
    return out;
}

Topology apply_failure(const Topology& t, const FailureScenario& f) {
    Topology out = t;
    switch (f.kind) {
    case FailureScenario::Kind::original:
        break;
    case FailureScenario::Kind::one_node:
        out.remove_node(f.node);
        break;
    case FailureScenario::Kind::one_link:
        out.remove_edge(f.link_i, f.link_j);
        break;
    case FailureScenario::Kind::random_links: {
        assert(f.fraction >= 0.0 && f.fraction < 1.0);
        auto edges = out.edge_list();
        const size_t k = static_cast<size_t>(f.fraction * static_cast<double>(edges.size()));
        Rng rng(f.seed);
        for (size_t i = 0; i < k; ++i) {
            const size_t j = i + rng.next_below(edges.size() - i);
            std::swap(edges[i], edges[j]);
            out.remove_edge(edges[i].first, edges[i].second);
        }
        break;
    }
    }
    return out;
}

std::vector<FailureScenario> enumerate_single_failures(const Topology& t) {
    std::vector<FailureScenario> out;
    for (int id : t.present_ids())
        out.push_back(FailureScenario::one_node(id));
    for (const auto& [i, j] : t.edge_list())
        out.push_back(FailureScenario::one_link(i, j));
    return out;
}

void validate(const Topology& t) {
    size_t half_edges = 0;
    for (int i = 0; i < t.node_count(); ++i) {
        const auto& nbrs = t.neighbors(i);
        if (!t.present(i) && !nbrs.empty())
            throw std::logic_error("absent node has incident edges: " + std::to_string(i));
        int prev = -1;
        for (int j : nbrs) {
            if (j == i)
                throw std::logic_error("self loop at " + std::to_string(i));
            if (j <= prev)
                throw std::logic_error("adjacency not strictly sorted at " + std::to_string(i));
            prev = j;
            if (!t.present(j))
                throw std::logic_error("edge to absent node " + std::to_string(j));
            const auto& back = t.neighbors(j);
            if (!std::binary_search(back.begin(), back.end(), i))
                throw std::logic_error("asymmetric edge " + std::to_string(i) + "-" +
                                       std::to_string(j));
        }
        half_edges += nbrs.size();
    }
    if (half_edges != 2 * t.edge_count())
        throw std::logic_error("edge count mismatch");
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void dump_topology(const Topology& t, std::ostream& out) {
    out << "# ggrsim topology\n";
    out << "# scheme " << scheme_name(t.scheme()) << "\n";
    out << "# nodes " << t.present_count() << "\n";
    for (int id : t.present_ids()) {
        const Address& a = t.address(id);
        out << id << ' ' << t.zone_id(id) << ' ' << fmt_double(a.radius()) << ' '
            << fmt_double(a.angular().theta) << ' ' << fmt_double(a.angular().phi) << '\n';
    }
    out << "# edges " << t.edge_count() << "\n";
    for (const auto& [i, j] : t.edge_list())
        out << i << ' ' << j << '\n';
}

Topology load_topology_dump(std::istream& in) {
    std::string line;
    std::optional<Scheme> scheme;
    struct NodeRec {
        int id = -1;
        std::string zone;
        double r = 0.0, theta = 0.0, phi = 0.0;
    };
    std::vector<NodeRec> nodes;
    std::vector<std::pair<int, int>> edges;
    size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string word;
            ss >> word;
            if (word == "scheme") {
                std::string name;
                ss >> name;
                scheme = scheme_from_name(name);
            }
            continue;
        }
        std::istringstream ss(line);
        std::vector<std::string> tok;
        std::string w;
        while (ss >> w)
            tok.push_back(w);
        if (tok.size() == 5) {
            NodeRec rec;
            rec.id = std::stoi(tok[0]);
            rec.zone = tok[1];
            rec.r = std::stod(tok[2]);
            rec.theta = std::stod(tok[3]);
            rec.phi = std::stod(tok[4]);
            nodes.push_back(std::move(rec));
        } else if (tok.size() == 2) {
            edges.emplace_back(std::stoi(tok[0]), std::stoi(tok[1]));
        } else {
            fail(Errc::parse_error,
                 "topology dump line " + std::to_string(line_no) + ": unrecognized record");
        }
    }
    if (!scheme)
        fail(Errc::parse_error, "topology dump: missing '# scheme' header");

    int max_id = -1;
    for (const auto& rec : nodes)
        max_id = std::max(max_id, rec.id);
    Topology t(*scheme);
    const bool hyper = *scheme != Scheme::geo;
    // Tombstoned ids show up as gaps; fill them with placeholder absent nodes
    // so that ids keep their meaning.
    std::vector<char> listed(max_id + 1, 0);
    for (const auto& rec : nodes) {
        if (rec.id < 0 || listed[rec.id])
            fail(Errc::parse_error, "topology dump: bad or duplicate node id");
        listed[rec.id] = 1;
    }
    std::vector<NodeRec> by_id(max_id + 1);
    for (const auto& rec : nodes)
        by_id[rec.id] = rec;
    for (int id = 0; id <= max_id; ++id) {
        if (listed[id]) {
            const auto& rec = by_id[id];
            const GeoPoint p{rec.theta, rec.phi};
            t.add_node(rec.zone, hyper ? Address::hyper(rec.r, p) : Address::geo(p));
        } else {
            t.add_node("?", hyper ? Address::hyper(0.0, GeoPoint{}) : Address::geo(GeoPoint{}));
            t.remove_node(id);
        }
    }
    for (const auto& [i, j] : edges) {
        if (!t.present(i) || !t.present(j))
            fail(Errc::parse_error, "topology dump: edge references missing node");
        t.add_edge(i, j);
    }
    return t;
}

} // namespace ggr
