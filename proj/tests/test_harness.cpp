#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ggr/errors.hpp"
#include "ggr/harness.hpp"
#include "ggr/rng.hpp"
#include "ggr/topology.hpp"

using namespace ggr;
using doctest::Approx;

namespace {

bool throws_code(Errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const SimError& e) {
        return e.code() == code;
    }
    return false;
}

std::string csv_of(const std::vector<MetricsReport>& rows) {
    std::ostringstream out;
    write_report_csv(rows, out);
    return out.str();
}

} // namespace

TEST_CASE("zone file loading") {
    SUBCASE("well-formed file") {
        std::istringstream in("zone_id,name,latitude_deg,longitude_deg,population\n"
                              "z1,alpha,42.36,-71.06,4694565\n"
                              "z2,beta,35.68,139.69,37400068\n"
                              "z3,gamma,-33.87,151.21,5312163\n");
        const ZoneTable t = load_zones(in);
        REQUIRE(t.size() == 3);
        CHECK(t.zones[0].zone_id == "z1");
        CHECK(t.zones[0].name == "alpha");
        CHECK(t.zones[0].score == 4694565.0);
        CHECK(t.zones[1].location.theta == Approx((90.0 - 35.68) * M_PI / 180.0).epsilon(1e-12));
        CHECK(t.index_of("z3") == 2);
        CHECK(t.index_of("zz") == ZoneTable::npos);
    }
    SUBCASE("latitude out of range") {
        std::istringstream in("zone_id,name,latitude_deg,longitude_deg,population\n"
                              "z1,a,91,0,100\n");
        CHECK(throws_code(Errc::invalid_latitude, [&] { load_zones(in); }));
    }
    SUBCASE("population below 1") {
        std::istringstream in("zone_id,name,latitude_deg,longitude_deg,population\n"
                              "z1,a,10,0,0\n");
        CHECK(throws_code(Errc::invalid_population, [&] { load_zones(in); }));
    }
    SUBCASE("duplicate zone id") {
        std::istringstream in("zone_id,name,latitude_deg,longitude_deg,population\n"
                              "z1,a,10,0,5\nz1,b,11,1,6\n");
        CHECK(throws_code(Errc::duplicate_zone_id, [&] { load_zones(in); }));
    }
    SUBCASE("bad arity") {
        std::istringstream in("zone_id,name,latitude_deg,longitude_deg,population\n"
                              "z1,a,10,0\n");
        CHECK(throws_code(Errc::parse_error, [&] { load_zones(in); }));
    }
    SUBCASE("missing header") {
        std::istringstream in("z1,a,10,0,5\n");
        CHECK(throws_code(Errc::parse_error, [&] { load_zones(in); }));
    }
    SUBCASE("save and reload") {
        SyntheticZoneSpec spec;
        spec.count = 20;
        spec.seed = 3;
        const ZoneTable t = synth_zones(spec);
        std::ostringstream out;
        save_zones(t, out);
        std::istringstream in(out.str());
        const ZoneTable u = load_zones(in);
        REQUIRE(u.size() == t.size());
        for (size_t i = 0; i < t.size(); ++i) {
            CHECK(u.zones[i].zone_id == t.zones[i].zone_id);
            CHECK(u.zones[i].score == t.zones[i].score);
            CHECK(u.zones[i].location.theta ==
                  Approx(t.zones[i].location.theta).epsilon(1e-12));
        }
    }
}

TEST_CASE("synthetic zones") {
    SUBCASE("two zones have a 2:1 score ratio") {
        SyntheticZoneSpec spec;
        spec.count = 2;
        spec.seed = 11;
        const ZoneTable t = synth_zones(spec);
        REQUIRE(t.size() == 2);
        CHECK(t.zones[0].score == 2.0 * t.zones[1].score);
    }
    SUBCASE("scores follow ceil(S/t)") {
        SyntheticZoneSpec spec;
        spec.count = 100;
        const ZoneTable t = synth_zones(spec);
        for (size_t i = 0; i < 100; ++i)
            CHECK(t.zones[i].score == std::ceil(1.0e6 / static_cast<double>(i + 1)));
        CHECK(t.zones.back().score >= 1.0);
    }
    SUBCASE("identical specs give identical tables") {
        SyntheticZoneSpec spec;
        spec.count = 50;
        spec.seed = 1234;
        const ZoneTable a = synth_zones(spec);
        const ZoneTable b = synth_zones(spec);
        for (size_t i = 0; i < 50; ++i) {
            CHECK(a.zones[i].zone_id == b.zones[i].zone_id);
            CHECK(a.zones[i].location.theta == b.zones[i].location.theta);
            CHECK(a.zones[i].location.phi == b.zones[i].location.phi);
        }
    }
    SUBCASE("uniform placement is area-correct") {
        SyntheticZoneSpec spec;
        spec.count = 10000;
        spec.seed = 99;
        const ZoneTable t = synth_zones(spec);
        double mean_cos = 0.0;
        for (const Zone& z : t.zones)
            mean_cos += std::cos(z.location.theta);
        mean_cos /= static_cast<double>(t.size());
        CHECK(std::abs(mean_cos) < 0.02);
    }
    SUBCASE("clustered placement stays on the sphere") {
        SyntheticZoneSpec spec;
        spec.count = 500;
        spec.seed = 5;
        spec.placement = SyntheticZoneSpec::Placement::clustered;
        spec.clusters = 4;
        spec.spread_deg = 3.0;
        const ZoneTable t = synth_zones(spec);
        for (const Zone& z : t.zones) {
            CHECK(z.location.theta >= 0.0);
            CHECK(z.location.theta <= M_PI);
            CHECK(z.location.phi >= 0.0);
            CHECK(z.location.phi < 2.0 * M_PI);
        }
    }
}

TEST_CASE("arrival order") {
    ZoneTable zones;
    zones.zones.push_back(Zone{"A", "", geo_from_degrees(0, 0), 100.0});
    zones.zones.push_back(Zone{"B", "", geo_from_degrees(0, 10), 50.0});

    SUBCASE("deterministic order follows descending score") {
        ArrivalPolicy p;
        const auto order = arrival_order(zones, p, nullptr, nullptr, 5);
        REQUIRE(order.size() == 2);
        CHECK(zones.zones[order[0]].zone_id == "A");
        CHECK(zones.zones[order[1]].zone_id == "B");
    }
    SUBCASE("randomized order repeats under one seed") {
        SyntheticZoneSpec spec;
        spec.count = 40;
        spec.seed = 2;
        const ZoneTable t = synth_zones(spec);
        ArrivalPolicy p;
        p.kind = ArrivalPolicy::Kind::randomized_proportional;
        p.seed = 41;
        const auto a = arrival_order(t, p, nullptr, nullptr, 5);
        const auto b = arrival_order(t, p, nullptr, nullptr, 5);
        CHECK(a == b);
        std::set<size_t> unique(a.begin(), a.end());
        CHECK(unique.size() == t.size()); // every zone exactly once
        p.seed = 42;
        CHECK(arrival_order(t, p, nullptr, nullptr, 5) != a);
    }
    SUBCASE("overwhelming weight goes first almost always") {
        ZoneTable skew;
        skew.zones.push_back(Zone{"A", "", geo_from_degrees(0, 0), 999999.0});
        skew.zones.push_back(Zone{"B", "", geo_from_degrees(0, 10), 1.0});
        int a_first = 0;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            ArrivalPolicy p;
            p.kind = ArrivalPolicy::Kind::randomized_proportional;
            p.seed = seed;
            const auto order = arrival_order(skew, p, nullptr, nullptr, 5);
            a_first += skew.zones[order[0]].zone_id == "A";
        }
        CHECK(a_first >= 95);
    }
    SUBCASE("hubs-first places every hub zone up front") {
        SyntheticZoneSpec spec;
        spec.count = 60;
        spec.seed = 7;
        const ZoneTable t = synth_zones(spec);
        const RegionMap regions = partition_regions(t, 4);
        const RankTable ranks = rank_zones_rgh(t, regions, 3, 5.0);

        ArrivalPolicy p;
        p.kind = ArrivalPolicy::Kind::randomized_proportional;
        p.seed = 9;
        p.hubs_first = true;
        const auto order = arrival_order(t, p, &ranks, &regions, 3);

        std::set<std::string> hubs;
        for (const RankAssignment& a : ranks.assignments())
            if (a.rank <= 3)
                hubs.insert(a.zone_id);
        REQUIRE(hubs.size() == 12);
        for (size_t i = 0; i < hubs.size(); ++i)
            CHECK(hubs.count(t.zones[order[i]].zone_id) == 1);
        // Ordered by (hub rank, region id): first 4 entries are the rank-1
        // hubs of regions r0..r3.
        const RankAssignment* first = ranks.find(t.zones[order[0]].zone_id);
        CHECK(first->rank == 1);
        CHECK(regions.region_of(t.zones[order[0]].zone_id) == "r0");
    }
}

TEST_CASE("config files") {
    SUBCASE("parse, serialize, reparse") {
        std::istringstream in("scheme_set = GH,RGH\n"
                              "zone_source = synth\n"
                              "synth_count = 300\n"
                              "synth_seed = 17\n"
                              "m = 4\n"
                              "xi = 6.5\n"
                              "# a comment\n"
                              "scenarios = original;random_links:0.2:5\n"
                              "checkpoints = 100,300\n"
                              "pair_ensemble = sampled:5000\n"
                              "master_seed = 77\n");
        const ExperimentConfig cfg = load_config(in);
        CHECK(cfg.scheme_set == std::vector<Scheme>{Scheme::gh, Scheme::rgh});
        CHECK(cfg.synth.count == 300);
        CHECK(cfg.m == 4);
        CHECK(cfg.xi == 6.5);
        REQUIRE(cfg.scenarios.size() == 2);
        CHECK(cfg.scenarios[1].kind == ScenarioSpec::Kind::random_links);
        CHECK(cfg.scenarios[1].trials == 5);
        CHECK(cfg.checkpoints == std::vector<int>{100, 300});
        CHECK(cfg.pair_ensemble.kind == PairMode::Kind::sampled);
        CHECK(cfg.pair_ensemble.count == 5000);
        CHECK(cfg.master_seed == 77);

        const std::string canon = serialize_config(cfg);
        std::istringstream again(canon);
        const ExperimentConfig cfg2 = load_config(again);
        CHECK(serialize_config(cfg2) == canon);
    }
    SUBCASE("unknown keys are rejected") {
        std::istringstream in("no_such_key = 1\n");
        CHECK(throws_code(Errc::config_error, [&] { load_config(in); }));
    }
    SUBCASE("delay constants require the explicit override flag") {
        std::istringstream in("delay_divisor = 50\n");
        CHECK(throws_code(Errc::config_error, [&] { load_config(in); }));
        std::istringstream ok("override_delay_constants = true\ndelay_divisor = 50\n");
        const ExperimentConfig cfg = load_config(ok);
        CHECK(cfg.delay.divisor == 50.0);
    }
    SUBCASE("bad scenario strings") {
        std::istringstream in("scenarios = random_links:1.5:3\n");
        CHECK(throws_code(Errc::config_error, [&] { load_config(in); }));
    }
}

TEST_CASE("experiment runs") {
    ExperimentConfig cfg;
    cfg.scheme_set = {Scheme::gh};
    cfg.zone_source = "synth";
    cfg.synth.count = 60;
    cfg.synth.seed = 21;
    cfg.checkpoints = {60};
    cfg.master_seed = 5;

    SUBCASE("one scheme, one checkpoint, original only gives one row") {
        const auto rows = run_experiment(cfg);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].scheme == "GH");
        CHECK(rows[0].n == 60);
        CHECK(rows[0].scenario == "original");
        CHECK(rows[0].pairs_evaluated == 60 * 59);
    }
    SUBCASE("identical configs produce byte-identical reports") {
        const auto a = run_experiment(cfg);
        const auto b = run_experiment(cfg);
        CHECK(csv_of(a) == csv_of(b));
    }
    SUBCASE("rows stream through the sink in order") {
        std::vector<std::string> streamed;
        const auto rows = run_experiment(
            cfg, [&](const MetricsReport& r) { streamed.push_back(format_report_row(r)); });
        REQUIRE(streamed.size() == rows.size());
        CHECK(streamed[0] == format_report_row(rows[0]));
    }
    SUBCASE("single failures produce one_node and one_link rows") {
        cfg.synth.count = 20;
        cfg.checkpoints = {20};
        cfg.scenarios = {ScenarioSpec{ScenarioSpec::Kind::single_failures}};
        const auto rows = run_experiment(cfg);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].scenario == "one_node");
        CHECK(rows[0].trials == 20);
        CHECK(rows[1].scenario == "one_link");
        CHECK(rows[1].trials > 0);
    }
    SUBCASE("random link scenarios aggregate the requested trials") {
        ScenarioSpec sc;
        sc.kind = ScenarioSpec::Kind::random_links;
        sc.fraction = 0.2;
        sc.trials = 3;
        cfg.scenarios = {sc};
        const auto rows = run_experiment(cfg);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].scenario == "random_links:0.2");
        CHECK(rows[0].trials == 3);
    }
    SUBCASE("RGH checkpoints start only after every hub arrived") {
        cfg.scheme_set = {Scheme::rgh};
        cfg.synth.count = 120;
        cfg.num_regions = 6;
        cfg.n_hubs = 3;
        cfg.checkpoints.clear(); // auto
        const auto rows = run_experiment(cfg);
        REQUIRE(!rows.empty());

        // Recompute the hub set and check they are inside the first checkpoint.
        const ZoneTable zones = synth_zones(cfg.synth);
        const RegionMap regions = partition_regions(zones, 6);
        const RankTable ranks = rank_zones_rgh(zones, regions, 3, 5.0);
        ArrivalPolicy p;
        const auto order = arrival_order(zones, p, &ranks, &regions, 3);
        std::set<std::string> hubs;
        for (const RankAssignment& a : ranks.assignments())
            if (a.rank <= 3)
                hubs.insert(a.zone_id);
        std::set<std::string> seen;
        for (int i = 0; i < rows[0].n; ++i)
            if (hubs.count(zones.zones[order[i]].zone_id))
                seen.insert(zones.zones[order[i]].zone_id);
        CHECK(seen.size() == hubs.size());
        // And the one before it would not contain them all.
        seen.clear();
        for (int i = 0; i + 1 < rows[0].n; ++i)
            if (hubs.count(zones.zones[order[i]].zone_id))
                seen.insert(zones.zones[order[i]].zone_id);
        CHECK(seen.size() < hubs.size());
    }
    SUBCASE("explicit checkpoints below the hub threshold are rejected") {
        cfg.scheme_set = {Scheme::rgh};
        cfg.synth.count = 120;
        cfg.num_regions = 6;
        cfg.n_hubs = 3;
        cfg.checkpoints = {2, 120};
        CHECK(throws_code(Errc::config_error, [&] { run_experiment(cfg); }));
    }
    SUBCASE("zone reuse is rejected unless the stress flag is set") {
        cfg.max_size = 90;
        cfg.checkpoints = {90};
        CHECK(throws_code(Errc::config_error, [&] { run_experiment(cfg); }));
        // With repeat_zones, growth revisits zones; co-located nodes exercise
        // the distance-tie path.
        cfg.repeat_zones = true;
        const auto rows = run_experiment(cfg);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].n == 90);
    }
}

TEST_CASE("experiments run from zone and region files") {
    SyntheticZoneSpec spec;
    spec.count = 40;
    spec.seed = 8;
    const ZoneTable zones = synth_zones(spec);
    {
        std::ofstream zf("tmp_zones.csv");
        save_zones(zones, zf);
    }
    {
        const ZoneTable reloaded = load_zones_file("tmp_zones.csv");
        const RegionMap map = partition_regions(reloaded, 4);
        std::ofstream rf("tmp_regions.csv");
        save_region_map(map, rf);
    }

    ExperimentConfig cfg;
    cfg.scheme_set = {Scheme::rgh};
    cfg.zone_source = "tmp_zones.csv";
    cfg.region_source = "tmp_regions.csv";
    cfg.num_regions = 4;
    cfg.n_hubs = 2;
    cfg.checkpoints = {40};
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].scheme == "RGH");
    CHECK(rows[0].n == 40);
    CHECK(rows[0].sr >= 0.0);

    SUBCASE("missing zone file is an io error") {
        cfg.zone_source = "no_such_zones.csv";
        CHECK(throws_code(Errc::io_error, [&] { run_experiment(cfg); }));
    }
}

TEST_CASE("report emission") {
    SUBCASE("empty report is just the header") {
        CHECK(csv_of({}) == std::string(kReportHeader) + "\n");
    }
    SUBCASE("one report is two lines") {
        ExperimentConfig cfg;
        cfg.scheme_set = {Scheme::geo};
        cfg.synth.count = 30;
        cfg.checkpoints = {30};
        const auto rows = run_experiment(cfg);
        const std::string csv = csv_of(rows);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
        CHECK(csv.rfind(kReportHeader, 0) == 0);
    }
    SUBCASE("emitted files are byte-identical across reruns") {
        ExperimentConfig cfg;
        cfg.scheme_set = {Scheme::gh};
        cfg.synth.count = 25;
        cfg.checkpoints = {25};
        auto slurp = [](const std::string& p) {
            std::ifstream in(p);
            return std::string(std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>());
        };
        emit_report(run_experiment(cfg), cfg, "tmp_report.csv");
        const std::string csv1 = slurp("tmp_report.csv");
        const std::string man1 = slurp("tmp_report.csv.manifest");
        emit_report(run_experiment(cfg), cfg, "tmp_report.csv");
        CHECK(slurp("tmp_report.csv") == csv1);
        CHECK(slurp("tmp_report.csv.manifest") == man1);
        CHECK(man1.find("version = ") != std::string::npos);
        CHECK(man1.find("master_seed = 42") != std::string::npos);
    }
}
