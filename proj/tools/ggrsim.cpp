// ggrsim: batch CLI around the GEO/GH/RGH addressing schemes, the
// m-nearest-neighbor growth rule, greedy geometric routing, and the
// SR / delay-stretch measurement harness.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ggr/errors.hpp"
#include "ggr/harness.hpp"
#include "ggr/kernels.hpp"
#include "ggr/metrics.hpp"
#include "ggr/routing.hpp"
#include "ggr/topology.hpp"

namespace {

using namespace ggr;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail(Errc::io_error, "cannot write: " + path);
    return out;
}

int cmd_synth(const std::string& out_path, const SyntheticZoneSpec& spec) {
    const ZoneTable zones = synth_zones(spec);
    if (out_path.empty()) {
        save_zones(zones, std::cout);
    } else {
        auto out = open_out(out_path);
        save_zones(zones, out);
    }
    return 0;
}

int cmd_regions(const std::string& zones_path, int num_regions, const std::string& out_path) {
    const ZoneTable zones = load_zones_file(zones_path);
    const RegionMap map = partition_regions(zones, num_regions);
    if (out_path.empty()) {
        save_region_map(map, std::cout);
    } else {
        auto out = open_out(out_path);
        save_region_map(map, out);
    }
    return 0;
}

struct GrowArgs {
    std::string zones_path;
    std::string scheme = "GH";
    int m = 5;
    double xi = 5.0;
    std::string regions_path; // empty = builtin partitioner (RGH only)
    int num_regions = 14;
    int n_hubs = 5;
    std::string order = "deterministic";
    uint64_t arrival_seed = 0;
    bool hubs_first = false;
    int size = 0; // 0 = all zones
    std::string out_path;
};

int cmd_grow(const GrowArgs& args) {
    const ZoneTable zones = load_zones_file(args.zones_path);
    const Scheme scheme = scheme_from_name(args.scheme);

    SchemeConfig scfg;
    scfg.scheme = scheme;
    scfg.m = args.m;
    scfg.xi = args.xi;
    scfg.num_regions = args.num_regions;
    scfg.n_hubs = args.n_hubs;

    // Ranks used for the scheme's addresses and, separately, the RGH ranks
    // that hubs-first arrival ordering needs.
    RegionMap regions;
    RankTable rgh_ranks;
    const bool need_rgh = scheme == Scheme::rgh || args.hubs_first;
    if (need_rgh) {
        regions = args.regions_path.empty() ? partition_regions(zones, args.num_regions)
                                            : load_region_map_file(args.regions_path, zones);
        rgh_ranks = rank_zones_rgh(zones, regions, args.n_hubs, args.xi);
    }
    RankTable scheme_ranks;
    if (scheme == Scheme::gh)
        scheme_ranks = rank_zones_gh(zones, args.xi);
    else if (scheme == Scheme::rgh)
        scheme_ranks = rgh_ranks;

    ArrivalPolicy policy;
    if (args.order == "deterministic") {
        policy.kind = ArrivalPolicy::Kind::deterministic_rank;
    } else if (args.order == "randomized") {
        policy.kind = ArrivalPolicy::Kind::randomized_proportional;
        policy.seed = args.arrival_seed;
        policy.hubs_first = args.hubs_first;
    } else {
        fail(Errc::config_error, "--order must be deterministic or randomized");
    }

    const auto arrival = arrival_order(zones, policy, need_rgh ? &rgh_ranks : nullptr,
                                       need_rgh ? &regions : nullptr, args.n_hubs);
    const size_t n = args.size > 0 ? std::min<size_t>(args.size, arrival.size()) : arrival.size();

    GrowthEngine engine(scfg, scheme == Scheme::geo ? nullptr : &scheme_ranks);
    for (size_t i = 0; i < n; ++i)
        engine.add(zones.zones[arrival[i]]);

    if (args.out_path.empty()) {
        dump_topology(engine.topology(), std::cout);
    } else {
        auto out = open_out(args.out_path);
        dump_topology(engine.topology(), out);
    }
    return 0;
}

int cmd_route(const std::string& topo_path, int src, int dst, bool strict) {
    std::ifstream in(topo_path);
    if (!in)
        fail(Errc::io_error, "cannot open topology: " + topo_path);
    const Topology t = load_topology_dump(in);

    GreedyOptions opts;
    opts.strict_progress = strict;
    const RouteResult res = greedy_route(t, src, dst, opts);

    const auto probe = t.coords().make_probe(t.address(dst));
    std::cout << "# scheme " << scheme_name(t.scheme()) << ", " << src << " -> " << dst << "\n";
    std::cout << "hop node zone dist_to_dst delay_ms\n";
    double delay = 0.0;
    for (size_t h = 0; h < res.path.size(); ++h) {
        const int id = res.path[h];
        if (h > 0)
            delay += link_delay_ms(t.address(res.path[h - 1]).angular(), t.address(id).angular());
        const double dist = t.coords().key_to_distance(t.coords().key_of(id, probe));
        std::ostringstream dist_s, delay_s;
        dist_s.precision(6);
        dist_s << dist;
        delay_s.precision(6);
        delay_s << delay;
        std::cout << h << ' ' << id << ' ' << t.zone_id(id) << ' ' << dist_s.str() << ' '
                  << delay_s.str() << "\n";
    }
    if (res.success) {
        std::ostringstream d;
        d.precision(6);
        d << res.delay_ms;
        std::cout << "success: " << res.path.size() - 1 << " hops, delay " << d.str() << " ms\n";
    } else {
        std::cout << "failure: "
                  << (res.reason == FailureReason::local_minimum ? "local minimum" : "hop limit")
                  << " after " << res.path.size() - 1 << " hops\n";
    }
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& out_path) {
    const ExperimentConfig cfg = load_config_file(config_path);

    std::ofstream csv(out_path);
    if (!csv)
        fail(Errc::io_error, "cannot write report: " + out_path);
    csv << kReportHeader << '\n';
    csv.flush();

    {
        std::ofstream manifest(out_path + ".manifest");
        if (!manifest)
            fail(Errc::io_error, "cannot write manifest: " + out_path + ".manifest");
        manifest << "# run manifest\n";
        manifest << "version = " << kToolVersion << "\n";
        manifest << serialize_config(cfg);
    }

    // Rows are flushed as soon as they are complete so an aborted run still
    // leaves usable partial results.
    run_experiment(cfg, [&](const MetricsReport& r) {
        csv << format_report_row(r) << '\n';
        csv.flush();
        std::cerr << format_report_row(r) << '\n';
    });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy geometric routing simulator (GEO / GH / RGH addressing)"};
    app.require_subcommand(1);

    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "kernel backend: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // synth
    auto* synth = app.add_subcommand("synth", "emit a synthetic zone file");
    ggr::SyntheticZoneSpec spec;
    std::string synth_out;
    std::string placement = "uniform";
    synth->add_option("--count", spec.count, "number of zones")->required();
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--placement", placement, "uniform or clustered")
        ->check(CLI::IsMember({"uniform", "clustered"}));
    synth->add_option("--clusters", spec.clusters, "cluster count (clustered)");
    synth->add_option("--spread-deg", spec.spread_deg, "cluster spread stddev, degrees");
    synth->add_option("-o,--out", synth_out, "output path (default stdout)");

    // regions
    auto* regions = app.add_subcommand("regions", "emit a region map from the built-in partitioner");
    std::string regions_zones, regions_out;
    int regions_m = 14;
    regions->add_option("--zones", regions_zones, "zone file")->required();
    regions->add_option("--num-regions", regions_m, "number of regions");
    regions->add_option("-o,--out", regions_out, "output path (default stdout)");

    // grow
    auto* grow = app.add_subcommand("grow", "grow a topology and dump it");
    GrowArgs ga;
    grow->add_option("--zones", ga.zones_path, "zone file")->required();
    grow->add_option("--scheme", ga.scheme, "GEO, GH or RGH")
        ->check(CLI::IsMember({"GEO", "GH", "RGH"}));
    grow->add_option("--m", ga.m, "attachment count");
    grow->add_option("--xi", ga.xi, "radial offset xi");
    grow->add_option("--regions-file", ga.regions_path, "region map file (RGH)");
    grow->add_option("--num-regions", ga.num_regions, "built-in partitioner regions (RGH)");
    grow->add_option("--n-hubs", ga.n_hubs, "hubs per region (RGH)");
    grow->add_option("--order", ga.order, "deterministic or randomized")
        ->check(CLI::IsMember({"deterministic", "randomized"}));
    grow->add_option("--arrival-seed", ga.arrival_seed, "randomized arrival seed");
    grow->add_flag("--hubs-first", ga.hubs_first, "place RGH hub zones first (randomized)");
    grow->add_option("--size", ga.size, "stop after this many nodes (0 = all)");
    grow->add_option("-o,--out", ga.out_path, "output path (default stdout)");

    // route
    auto* route = app.add_subcommand("route", "trace a single greedy route");
    std::string route_topo;
    int route_src = 0, route_dst = 0;
    bool route_strict = false;
    route->add_option("--topology", route_topo, "topology dump")->required();
    route->add_option("--src", route_src, "source node id")->required();
    route->add_option("--dst", route_dst, "destination node id")->required();
    route->add_flag("--strict", route_strict, "strict-progress greedy variant");

    // eval
    auto* eval = app.add_subcommand("eval", "run a full experiment from a config file");
    std::string eval_config, eval_out = "report.csv";
    eval->add_option("--config", eval_config, "experiment config file")->required();
    eval->add_option("-o,--out", eval_out, "report CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (kernel == "scalar")
            ggr::kernels::force_backend(ggr::kernels::Backend::scalar);
        else if (kernel == "avx2")
            ggr::kernels::force_backend(ggr::kernels::Backend::avx2);

        if (synth->parsed()) {
            spec.placement = placement == "clustered" ? ggr::SyntheticZoneSpec::Placement::clustered
                                                      : ggr::SyntheticZoneSpec::Placement::uniform;
            return cmd_synth(synth_out, spec);
        }
        if (regions->parsed())
            return cmd_regions(regions_zones, regions_m, regions_out);
        if (grow->parsed())
            return cmd_grow(ga);
        if (route->parsed())
            return cmd_route(route_topo, route_src, route_dst, route_strict);
        if (eval->parsed())
            return cmd_eval(eval_config, eval_out);
    } catch (const ggr::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case ggr::Errc::parse_error:
        case ggr::Errc::config_error:
        case ggr::Errc::invalid_latitude:
        case ggr::Errc::invalid_population:
        case ggr::Errc::duplicate_zone_id:
        case ggr::Errc::unknown_zone:
        case ggr::Errc::unassigned_zone:
            return 1;
        default:
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
