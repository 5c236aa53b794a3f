#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "ggr/addressing.hpp"
#include "ggr/errors.hpp"
#include "ggr/rng.hpp"
#include "ggr/topology.hpp"
#include "oracles.hpp"

using namespace ggr;

namespace {

ZoneTable equator_zones(std::initializer_list<std::pair<const char*, double>> id_lon) {
    ZoneTable t;
    for (const auto& [id, lon] : id_lon)
        t.zones.push_back(Zone{id, id, geo_from_degrees(0.0, lon), 1.0});
    return t;
}

// Random synthetic GH instance grown with the design scheme.
Topology random_gh_topology(int n, int m, uint64_t seed) {
    Rng rng(seed);
    ZoneTable zones;
    for (int i = 0; i < n; ++i)
        zones.zones.push_back(Zone{"z" + std::to_string(1000 + i), "", oracle::random_point(rng),
                                   1.0 + static_cast<double>(rng.next_below(100000))});
    const RankTable ranks = rank_zones_gh(zones, 5.0);
    SchemeConfig cfg;
    cfg.scheme = Scheme::gh;
    cfg.m = m;
    return grow(zones.zones, cfg, &ranks);
}

size_t expected_edges(int n, int m) {
    const int k = std::min(n, m);
    return static_cast<size_t>(k) * (k - 1) / 2 + static_cast<size_t>(std::max(0, n - m)) * m;
}

bool throws_code(Errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const SimError& e) {
        return e.code() == code;
    }
    return false;
}

} // namespace

TEST_CASE("bootstrap growth") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::geo;
    cfg.m = 5;

    SUBCASE("one arrival gives an isolated node") {
        const ZoneTable z = equator_zones({{"a", 0.0}});
        const Topology t = grow(z.zones, cfg, nullptr);
        CHECK(t.node_count() == 1);
        CHECK(t.edge_count() == 0);
    }
    SUBCASE("three arrivals with m = 5 form a triangle") {
        const ZoneTable z = equator_zones({{"a", 0.0}, {"b", 10.0}, {"c", 20.0}});
        const Topology t = grow(z.zones, cfg, nullptr);
        CHECK(t.edge_count() == 3);
        CHECK(t.has_edge(0, 1));
        CHECK(t.has_edge(0, 2));
        CHECK(t.has_edge(1, 2));
        validate(t);
    }
}

TEST_CASE("arrivals link to the m nearest existing nodes") {
    // A-B-C on a line, then D closest to C and B; m = 2 links D to {B, C}.
    SchemeConfig cfg;
    cfg.scheme = Scheme::geo;
    cfg.m = 2;
    const ZoneTable z = equator_zones({{"a", 0.0}, {"b", 10.0}, {"c", 20.0}, {"d", 21.0}});
    const Topology t = grow(z.zones, cfg, nullptr);
    CHECK(t.has_edge(3, 1));
    CHECK(t.has_edge(3, 2));
    CHECK_FALSE(t.has_edge(3, 0));
    // Brute-force cross-check of the nearest-2 rule under the km metric.
    const auto want = oracle::nearest_by_scan(t, t.address(3), 3);
    CHECK(want[0] == 3); // itself at distance 0
    CHECK(want[1] == 2);
    CHECK(want[2] == 1);
}

TEST_CASE("edge count closed form and average degree") {
    for (int n : {1, 2, 3, 5, 6, 7, 20, 150}) {
        const Topology t = random_gh_topology(n, 5, 42 + n);
        CHECK(t.edge_count() == expected_edges(n, 5));
        validate(t);
    }
    const int n = 1000;
    const Topology t = random_gh_topology(n, 5, 9);
    CHECK(t.edge_count() == expected_edges(n, 5));
    const double avg_degree = 2.0 * static_cast<double>(t.edge_count()) / n;
    CHECK(avg_degree > 2.0 * 5 * 0.95);
    CHECK(avg_degree <= 2.0 * 5);
}

TEST_CASE("nearest_existing") {
    const Topology t = random_gh_topology(50, 5, 77);

    SUBCASE("m larger than the node count returns everything sorted by distance") {
        const auto got = nearest_existing(t, t.address(10), 1000);
        CHECK(got.size() == 50);
        CHECK(got == oracle::nearest_by_scan(t, t.address(10), 1000));
    }
    SUBCASE("a target equal to an existing address ranks that node first") {
        const auto got = nearest_existing(t, t.address(31), 3);
        REQUIRE(got.size() == 3);
        CHECK(got[0] == 31);
    }
    SUBCASE("matches the linear-scan oracle") {
        Rng rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            const Address target =
                Address::hyper(std::log(5.0 + 1 + rng.next_below(50)), oracle::random_point(rng));
            CHECK(nearest_existing(t, target, 5) == oracle::nearest_by_scan(t, target, 5));
        }
    }
}

TEST_CASE("failure application") {
    const Topology t = random_gh_topology(40, 5, 3);

    SUBCASE("removing zero links changes nothing") {
        const Topology u = apply_failure(t, FailureScenario::random_links(0.0, 1));
        CHECK(u.edge_list() == t.edge_list());
    }
    SUBCASE("node removal drops exactly its degree") {
        const int id = 7;
        const size_t deg = t.neighbors(id).size();
        const Topology u = apply_failure(t, FailureScenario::one_node(id));
        CHECK(u.edge_count() == t.edge_count() - deg);
        CHECK_FALSE(u.present(id));
        CHECK(u.present_count() == t.present_count() - 1);
        CHECK(u.node_count() == t.node_count()); // ids preserved
        validate(u);
    }
    SUBCASE("20% link removal removes floor(0.2 E) edges") {
        // 40 nodes at m=5: C(5,2) + 35*5 = 185 edges; floor(0.2*185) = 37.
        REQUIRE(t.edge_count() == 185);
        const Topology u = apply_failure(t, FailureScenario::random_links(0.2, 99));
        CHECK(u.edge_count() == 185 - 37);
        validate(u);
    }
    SUBCASE("the input is never mutated and equal seeds repeat exactly") {
        const auto before = t.edge_list();
        const Topology u1 = apply_failure(t, FailureScenario::random_links(0.2, 1234));
        const Topology u2 = apply_failure(t, FailureScenario::random_links(0.2, 1234));
        CHECK(t.edge_list() == before);
        CHECK(u1.edge_list() == u2.edge_list());
        const Topology u3 = apply_failure(t, FailureScenario::random_links(0.2, 1235));
        CHECK(u1.edge_list() != u3.edge_list());
    }
    SUBCASE("link removal errors") {
        CHECK(throws_code(Errc::no_such_link, [&] {
            Topology u = apply_failure(t, FailureScenario::one_link(0, 39));
            (void)u;
        }));
        CHECK(throws_code(Errc::no_such_node,
                          [&] { apply_failure(t, FailureScenario::one_node(400)); }));
    }
    SUBCASE("double node removal is an error") {
        const Topology u = apply_failure(t, FailureScenario::one_node(7));
        CHECK(throws_code(Errc::no_such_node, [&] { apply_failure(u, FailureScenario::one_node(7)); }));
    }
}

TEST_CASE("single-failure enumeration") {
    SUBCASE("empty graph") {
        const Topology t(Scheme::geo);
        CHECK(enumerate_single_failures(t).empty());
    }
    SUBCASE("triangle gives 3 + 3 scenarios") {
        SchemeConfig cfg;
        cfg.scheme = Scheme::geo;
        cfg.m = 5;
        const ZoneTable z = equator_zones({{"a", 0.0}, {"b", 10.0}, {"c", 20.0}});
        const Topology t = grow(z.zones, cfg, nullptr);
        const auto fs = enumerate_single_failures(t);
        CHECK(fs.size() == 6);
        CHECK(fs[0].kind == FailureScenario::Kind::one_node);
        CHECK(fs[3].kind == FailureScenario::Kind::one_link);
    }
    SUBCASE("testbed-sized graph: one per node plus one per edge") {
        const Topology t = random_gh_topology(33, 5, 11);
        const auto fs = enumerate_single_failures(t);
        CHECK(fs.size() == 33 + t.edge_count());
    }
}

TEST_CASE("dump and reload round trip") {
    const Topology t = random_gh_topology(25, 5, 21);
    std::ostringstream out;
    dump_topology(t, out);
    std::istringstream in(out.str());
    const Topology u = load_topology_dump(in);

    CHECK(u.scheme() == t.scheme());
    CHECK(u.node_count() == t.node_count());
    CHECK(u.edge_list() == t.edge_list());
    for (int i = 0; i < t.node_count(); ++i) {
        CHECK(u.zone_id(i) == t.zone_id(i));
        CHECK(u.address(i).radius() == t.address(i).radius());
        CHECK(u.address(i).angular().theta == t.address(i).angular().theta);
        CHECK(u.address(i).angular().phi == t.address(i).angular().phi);
    }

    SUBCASE("round trip survives a tombstone") {
        const Topology damaged = apply_failure(t, FailureScenario::one_node(3));
        std::ostringstream out2;
        dump_topology(damaged, out2);
        std::istringstream in2(out2.str());
        const Topology v = load_topology_dump(in2);
        CHECK_FALSE(v.present(3));
        CHECK(v.present_count() == damaged.present_count());
        CHECK(v.edge_list() == damaged.edge_list());
    }
}

TEST_CASE("incremental growth equals batch growth") {
    Rng rng(1);
    ZoneTable zones;
    for (int i = 0; i < 60; ++i)
        zones.zones.push_back(Zone{"z" + std::to_string(100 + i), "", oracle::random_point(rng),
                                   1.0 + static_cast<double>(rng.next_below(1000))});
    const RankTable ranks = rank_zones_gh(zones, 5.0);
    SchemeConfig cfg;
    cfg.scheme = Scheme::gh;
    cfg.m = 5;

    GrowthEngine engine(cfg, &ranks);
    for (int i = 0; i < 60; ++i) {
        engine.add(zones.zones[i]);
        if (i == 29) {
            // Snapshot halfway: must equal growing the prefix from scratch.
            const std::vector<Zone> prefix(zones.zones.begin(), zones.zones.begin() + 30);
            const Topology fresh = grow(prefix, cfg, &ranks);
            CHECK(engine.topology().edge_list() == fresh.edge_list());
        }
    }
    const Topology full = grow(zones.zones, cfg, &ranks);
    CHECK(engine.topology().edge_list() == full.edge_list());
}
