#include "ggr/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ggr/errors.hpp"
#include "ggr/rng.hpp"
#include "ggr/topology.hpp"

namespace ggr {

const char* const kToolVersion = "ggrsim 0.1.0";
const char* const kReportHeader =
    "scheme,n,scenario,trials,pairs,disconnected_fraction,sr,ods_p50,ods_p95,uds_p50,uds_p95,seed";

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(s);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    if (!s.empty() && s.back() == sep)
        out.push_back("");
    return out;
}

double parse_double(const std::string& s, size_t line_no, const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(Errc::parse_error,
             "line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
}

std::string fmt6(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ZoneTable load_zones(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line).rfind("zone_id", 0) != 0)
        fail(Errc::parse_error, "zone file: missing header line");

    ZoneTable table;
    std::unordered_set<std::string> seen;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split(line, ',');
        if (fields.size() != 5)
            fail(Errc::parse_error, "line " + std::to_string(line_no) +
                                        ": expected zone_id,name,latitude_deg,longitude_deg,population");
        const std::string id = trim(fields[0]);
        if (id.empty())
            fail(Errc::parse_error, "line " + std::to_string(line_no) + ": empty zone_id");
        if (!seen.insert(id).second)
            fail(Errc::duplicate_zone_id,
                 "line " + std::to_string(line_no) + ": duplicate zone_id " + id);
        const double lat = parse_double(trim(fields[2]), line_no, "latitude");
        if (lat < -90.0 || lat > 90.0)
            fail(Errc::invalid_latitude,
                 "line " + std::to_string(line_no) + ": latitude out of [-90, 90]");
        const double lon = parse_double(trim(fields[3]), line_no, "longitude");
        const double pop = parse_double(trim(fields[4]), line_no, "population");
        if (!(pop >= 1.0))
            fail(Errc::invalid_population,
                 "line " + std::to_string(line_no) + ": population must be >= 1");
        table.zones.push_back(Zone{id, trim(fields[1]), geo_from_degrees(lat, lon), pop});
    }
    return table;
}

ZoneTable load_zones_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::io_error, "cannot open zone file: " + path);
    return load_zones(in);
}

void save_zones(const ZoneTable& zones, std::ostream& out) {
    out << "zone_id,name,latitude_deg,longitude_deg,population\n";
    for (const Zone& z : zones.zones) {
        const double lat = 90.0 - z.location.theta * 180.0 / kPi;
        double lon = z.location.phi * 180.0 / kPi;
        if (lon > 180.0)
            lon -= 360.0;
        out << z.zone_id << ',' << z.name << ',' << fmt17(lat) << ',' << fmt17(lon) << ','
            << fmt17(z.score) << '\n';
    }
}

namespace {

// Great-circle destination: start at `c`, move angular distance `delta`
// along initial bearing `beta`.
GeoPoint geo_offset(const GeoPoint& c, double beta, double delta) {
    const double ct = std::cos(c.theta), st = std::sin(c.theta);
    const double cd = std::cos(delta), sd = std::sin(delta);
    double cos_theta = ct * cd + st * sd * std::cos(beta);
    cos_theta = std::min(1.0, std::max(-1.0, cos_theta));
    const double theta = std::acos(cos_theta);
    double phi = c.phi + std::atan2(std::sin(beta) * sd * st, cd - ct * cos_theta);
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0)
        phi += kTwoPi;
    if (phi >= kTwoPi)
        phi = 0.0;
    return GeoPoint{theta, phi};
}

GeoPoint uniform_sphere_point(Rng& rng) {
    // Area-correct: cos(theta) uniform in [-1, 1].
    const double cos_theta = 1.0 - 2.0 * rng.next_double();
    const double theta = std::acos(std::min(1.0, std::max(-1.0, cos_theta)));
    const double phi = kTwoPi * rng.next_double();
    return GeoPoint{theta, phi};
}

double gaussian(Rng& rng) {
    const double u1 = 1.0 - rng.next_double(); // (0, 1]
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace

ZoneTable synth_zones(const SyntheticZoneSpec& spec) {
    const size_t q = spec.count;
    const double scale = std::max(1.0e6, static_cast<double>(q));
    const int width = static_cast<int>(std::to_string(q).size());

    Rng rng(spec.seed);
    std::vector<GeoPoint> centers;
    if (spec.placement == SyntheticZoneSpec::Placement::clustered) {
        const int k = std::max(1, spec.clusters);
        centers.reserve(k);
        for (int i = 0; i < k; ++i)
            centers.push_back(uniform_sphere_point(rng));
    }

    ZoneTable table;
    table.zones.reserve(q);
    for (size_t t = 1; t <= q; ++t) {
        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "z%0*zu", width, t);
        Zone z;
        z.zone_id = idbuf;
        z.name = "city-" + std::to_string(t);
        z.score = std::ceil(scale / static_cast<double>(t));
        if (spec.placement == SyntheticZoneSpec::Placement::uniform) {
            z.location = uniform_sphere_point(rng);
        } else {
            const GeoPoint& c = centers[rng.next_below(centers.size())];
            const double spread_rad = spec.spread_deg * kPi / 180.0;
            const double delta = std::abs(gaussian(rng)) * spread_rad;
            const double beta = kTwoPi * rng.next_double();
            z.location = geo_offset(c, beta, delta);
        }
        table.zones.push_back(std::move(z));
    }
    return table;
}

namespace {

// Fenwick tree over zone weights for sequential draws without replacement.
class WeightedSampler {
public:
    explicit WeightedSampler(std::vector<double> weights)
        : w_(std::move(weights)), tree_(w_.size() + 1, 0.0) {
        for (size_t i = 0; i < w_.size(); ++i)
            add(i, w_[i]);
    }

    double total() const { return prefix(w_.size()); }

    void remove(size_t i) {
        add(i, -w_[i]);
        w_[i] = 0.0;
    }

    // Smallest index whose cumulative weight exceeds x.
    size_t locate(double x) const {
        size_t pos = 0;
        double rem = x;
        for (size_t bit = std::bit_floor(w_.size()); bit; bit >>= 1) {
            const size_t next = pos + bit;
            if (next <= w_.size() && tree_[next] <= rem) {
                pos = next;
                rem -= tree_[next];
            }
        }
        size_t idx = pos;
        while (idx < w_.size() && w_[idx] <= 0.0)
            ++idx;
        if (idx >= w_.size()) { // float round-off at the upper edge
            idx = w_.size();
            while (idx > 0 && w_[idx - 1] <= 0.0)
                --idx;
            if (idx == 0)
                throw std::logic_error("weighted draw from an empty sampler");
            --idx;
        }
        return idx;
    }

private:
    void add(size_t i, double delta) {
        for (size_t k = i + 1; k <= w_.size(); k += k & (~k + 1))
            tree_[k] += delta;
    }
    double prefix(size_t k) const {
        double s = 0.0;
        for (; k; k -= k & (~k + 1))
            s += tree_[k];
        return s;
    }

    std::vector<double> w_;
    std::vector<double> tree_;
};

} // namespace

std::vector<size_t> arrival_order(const ZoneTable& zones, const ArrivalPolicy& policy,
                                  const RankTable* rgh_ranks, const RegionMap* regions,
                                  int n_hubs) {
    const size_t q = zones.size();
    std::vector<size_t> order;
    order.reserve(q);

    if (policy.kind == ArrivalPolicy::Kind::deterministic_rank) {
        order.resize(q);
        for (size_t i = 0; i < q; ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (zones.zones[a].score != zones.zones[b].score)
                return zones.zones[a].score > zones.zones[b].score;
            return zones.zones[a].zone_id < zones.zones[b].zone_id;
        });
        return order;
    }

    std::unordered_map<std::string, size_t> index;
    index.reserve(q);
    for (size_t i = 0; i < q; ++i)
        index.emplace(zones.zones[i].zone_id, i);

    std::vector<char> placed(q, 0);
    if (policy.hubs_first && rgh_ranks && regions) {
        // Hub zones up front, ordered by (hub rank, region id).
        struct Hub {
            int rank;
            std::string region;
            size_t idx;
        };
        std::vector<Hub> hubs;
        for (const RankAssignment& a : rgh_ranks->assignments()) {
            if (a.rank > n_hubs)
                continue;
            const size_t idx = index.at(a.zone_id);
            hubs.push_back({a.rank, regions->region_of(a.zone_id), idx});
        }
        std::sort(hubs.begin(), hubs.end(), [](const Hub& a, const Hub& b) {
            if (a.rank != b.rank)
                return a.rank < b.rank;
            return a.region < b.region;
        });
        for (const Hub& h : hubs) {
            order.push_back(h.idx);
            placed[h.idx] = 1;
        }
    }

    std::vector<double> weights(q);
    for (size_t i = 0; i < q; ++i)
        weights[i] = placed[i] ? 0.0 : zones.zones[i].score;
    WeightedSampler sampler(std::move(weights));
    Rng rng(policy.seed);
    while (order.size() < q) {
        const double x = rng.next_double() * sampler.total();
        const size_t idx = sampler.locate(x);
        order.push_back(idx);
        sampler.remove(idx);
    }
    return order;
}

// ---------------------------------------------------------------------------
// Config

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    fail(Errc::config_error, "config key " + key + ": expected true/false");
}

uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const uint64_t r = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        fail(Errc::config_error, "config key " + key + ": expected unsigned integer, got '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const int r = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        fail(Errc::config_error, "config key " + key + ": expected integer, got '" + v + "'");
    }
}

double parse_cfg_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        fail(Errc::config_error, "config key " + key + ": expected number, got '" + v + "'");
    }
}

ScenarioSpec parse_scenario(const std::string& tok) {
    ScenarioSpec sc;
    if (tok == "original") {
        sc.kind = ScenarioSpec::Kind::original;
        return sc;
    }
    if (tok == "single_failures") {
        sc.kind = ScenarioSpec::Kind::single_failures;
        return sc;
    }
    if (tok.rfind("random_links:", 0) == 0) {
        const auto parts = split(tok, ':');
        if (parts.size() != 3)
            fail(Errc::config_error, "scenario '" + tok + "': expected random_links:<fraction>:<trials>");
        sc.kind = ScenarioSpec::Kind::random_links;
        sc.fraction = parse_cfg_double(parts[1], "scenarios");
        sc.trials = parse_int(parts[2], "scenarios");
        if (sc.fraction < 0.0 || sc.fraction >= 1.0)
            fail(Errc::config_error, "random_links fraction must be in [0, 1)");
        if (sc.trials < 1)
            fail(Errc::config_error, "random_links trials must be >= 1");
        return sc;
    }
    fail(Errc::config_error, "unknown scenario '" + tok + "'");
}

std::string scenario_key(const ScenarioSpec& sc) {
    switch (sc.kind) {
    case ScenarioSpec::Kind::original: return "original";
    case ScenarioSpec::Kind::single_failures: return "single_failures";
    case ScenarioSpec::Kind::random_links:
        return "random_links:" + fmt6(sc.fraction) + ":" + std::to_string(sc.trials);
    }
    return "?";
}

} // namespace

ExperimentConfig load_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(Errc::config_error,
                 "config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "scheme_set") {
            cfg.scheme_set.clear();
            for (const std::string& tok : split(value, ','))
                cfg.scheme_set.push_back(scheme_from_name(trim(tok)));
            if (cfg.scheme_set.empty())
                fail(Errc::config_error, "scheme_set must not be empty");
        } else if (key == "zone_source") {
            cfg.zone_source = value;
        } else if (key == "synth_count") {
            cfg.synth.count = parse_u64(value, key);
        } else if (key == "synth_seed") {
            cfg.synth.seed = parse_u64(value, key);
        } else if (key == "synth_placement") {
            if (value == "uniform")
                cfg.synth.placement = SyntheticZoneSpec::Placement::uniform;
            else if (value == "clustered")
                cfg.synth.placement = SyntheticZoneSpec::Placement::clustered;
            else
                fail(Errc::config_error, "synth_placement: expected uniform or clustered");
        } else if (key == "synth_clusters") {
            cfg.synth.clusters = parse_int(value, key);
        } else if (key == "synth_spread_deg") {
            cfg.synth.spread_deg = parse_cfg_double(value, key);
        } else if (key == "region_source") {
            cfg.region_source = value;
        } else if (key == "m") {
            cfg.m = parse_int(value, key);
        } else if (key == "xi") {
            cfg.xi = parse_cfg_double(value, key);
        } else if (key == "num_regions") {
            cfg.num_regions = parse_int(value, key);
        } else if (key == "n_hubs") {
            cfg.n_hubs = parse_int(value, key);
        } else if (key == "arrival_policy") {
            if (value == "deterministic_rank")
                cfg.arrival.kind = ArrivalPolicy::Kind::deterministic_rank;
            else if (value == "randomized_proportional")
                cfg.arrival.kind = ArrivalPolicy::Kind::randomized_proportional;
            else
                fail(Errc::config_error,
                     "arrival_policy: expected deterministic_rank or randomized_proportional");
        } else if (key == "arrival_seed") {
            cfg.arrival.seed = parse_u64(value, key);
        } else if (key == "hubs_first") {
            cfg.arrival.hubs_first = parse_bool(value, key);
        } else if (key == "repeat_zones") {
            cfg.repeat_zones = parse_bool(value, key);
        } else if (key == "checkpoints") {
            cfg.checkpoints.clear();
            if (value != "auto")
                for (const std::string& tok : split(value, ','))
                    cfg.checkpoints.push_back(parse_int(trim(tok), key));
        } else if (key == "max_size") {
            cfg.max_size = parse_int(value, key);
        } else if (key == "scenarios") {
            cfg.scenarios.clear();
            for (const std::string& tok : split(value, ';'))
                cfg.scenarios.push_back(parse_scenario(trim(tok)));
        } else if (key == "pair_ensemble") {
            if (value == "auto") {
                cfg.pair_ensemble.kind = PairMode::Kind::automatic;
            } else if (value == "all_pairs") {
                cfg.pair_ensemble.kind = PairMode::Kind::all;
            } else if (value.rfind("sampled:", 0) == 0) {
                cfg.pair_ensemble.kind = PairMode::Kind::sampled;
                cfg.pair_ensemble.count = parse_u64(value.substr(8), key);
            } else {
                fail(Errc::config_error, "pair_ensemble: expected auto, all_pairs or sampled:<k>");
            }
        } else if (key == "master_seed") {
            cfg.master_seed = parse_u64(value, key);
        } else if (key == "greedy_strict") {
            cfg.greedy_strict = parse_bool(value, key);
        } else if (key == "override_delay_constants") {
            cfg.override_delay_constants = parse_bool(value, key);
        } else if (key == "delay_offset_km") {
            cfg.delay.offset_km = parse_cfg_double(value, key);
        } else if (key == "delay_divisor") {
            cfg.delay.divisor = parse_cfg_double(value, key);
        } else {
            fail(Errc::config_error, "unknown config key: " + key);
        }
    }

    if (cfg.m < 1)
        fail(Errc::config_error, "m must be >= 1");
    if (cfg.xi < 0.0)
        fail(Errc::config_error, "xi must be >= 0");
    if (cfg.num_regions < 1 || cfg.n_hubs < 1)
        fail(Errc::config_error, "num_regions and n_hubs must be >= 1");
    if (cfg.zone_source == "synth" && cfg.synth.count < 2)
        fail(Errc::config_error, "synth_count must be >= 2");
    if (!cfg.override_delay_constants && cfg.delay.overridden())
        fail(Errc::config_error,
             "delay constants are fixed; set override_delay_constants = true to change them");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::io_error, "cannot open config file: " + path);
    return load_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "scheme_set = ";
    for (size_t i = 0; i < cfg.scheme_set.size(); ++i)
        out << (i ? "," : "") << scheme_name(cfg.scheme_set[i]);
    out << "\n";
    out << "zone_source = " << cfg.zone_source << "\n";
    if (cfg.zone_source == "synth") {
        out << "synth_count = " << cfg.synth.count << "\n";
        out << "synth_seed = " << cfg.synth.seed << "\n";
        out << "synth_placement = "
            << (cfg.synth.placement == SyntheticZoneSpec::Placement::uniform ? "uniform"
                                                                             : "clustered")
            << "\n";
        if (cfg.synth.placement == SyntheticZoneSpec::Placement::clustered) {
            out << "synth_clusters = " << cfg.synth.clusters << "\n";
            out << "synth_spread_deg = " << fmt6(cfg.synth.spread_deg) << "\n";
        }
    }
    out << "region_source = " << cfg.region_source << "\n";
    out << "m = " << cfg.m << "\n";
    out << "xi = " << fmt6(cfg.xi) << "\n";
    out << "num_regions = " << cfg.num_regions << "\n";
    out << "n_hubs = " << cfg.n_hubs << "\n";
    out << "arrival_policy = "
        << (cfg.arrival.kind == ArrivalPolicy::Kind::deterministic_rank
                ? "deterministic_rank"
                : "randomized_proportional")
        << "\n";
    if (cfg.arrival.kind == ArrivalPolicy::Kind::randomized_proportional) {
        out << "arrival_seed = " << cfg.arrival.seed << "\n";
        out << "hubs_first = " << (cfg.arrival.hubs_first ? "true" : "false") << "\n";
    }
    out << "repeat_zones = " << (cfg.repeat_zones ? "true" : "false") << "\n";
    out << "checkpoints = ";
    if (cfg.checkpoints.empty()) {
        out << "auto";
    } else {
        for (size_t i = 0; i < cfg.checkpoints.size(); ++i)
            out << (i ? "," : "") << cfg.checkpoints[i];
    }
    out << "\n";
    out << "max_size = " << cfg.max_size << "\n";
    out << "scenarios = ";
    for (size_t i = 0; i < cfg.scenarios.size(); ++i)
        out << (i ? ";" : "") << scenario_key(cfg.scenarios[i]);
    out << "\n";
    out << "pair_ensemble = ";
    switch (cfg.pair_ensemble.kind) {
    case PairMode::Kind::automatic: out << "auto"; break;
    case PairMode::Kind::all: out << "all_pairs"; break;
    case PairMode::Kind::sampled: out << "sampled:" << cfg.pair_ensemble.count; break;
    }
    out << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "greedy_strict = " << (cfg.greedy_strict ? "true" : "false") << "\n";
    out << "override_delay_constants = " << (cfg.override_delay_constants ? "true" : "false")
        << "\n";
    if (cfg.override_delay_constants) {
        out << "delay_offset_km = " << fmt6(cfg.delay.offset_km) << "\n";
        out << "delay_divisor = " << fmt6(cfg.delay.divisor) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Experiment orchestration

namespace {

PairEnsemble make_ensemble(const Topology& t, const PairMode& mode, uint64_t seed) {
    switch (mode.kind) {
    case PairMode::Kind::all:
        return all_pairs(t);
    case PairMode::Kind::sampled:
        return sampled_pairs(t, mode.count, seed);
    case PairMode::Kind::automatic:
        break;
    }
    if (t.present_count() <= 2000)
        return all_pairs(t);
    return sampled_pairs(t, 100000, seed);
}

bool scheme_in(const std::vector<Scheme>& set, Scheme s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

} // namespace

std::vector<MetricsReport> run_experiment(const ExperimentConfig& cfg,
                                          const std::function<void(const MetricsReport&)>& row_sink) {
    ZoneTable zones =
        cfg.zone_source == "synth" ? synth_zones(cfg.synth) : load_zones_file(cfg.zone_source);
    if (zones.size() < 2)
        fail(Errc::config_error, "need at least 2 zones");

    const bool rgh_in_set = scheme_in(cfg.scheme_set, Scheme::rgh);
    const bool need_rgh =
        rgh_in_set || (cfg.arrival.kind == ArrivalPolicy::Kind::randomized_proportional &&
                       cfg.arrival.hubs_first);

    RegionMap regions;
    RankTable rgh_ranks;
    if (need_rgh) {
        regions = cfg.region_source == "builtin"
                      ? partition_regions(zones, cfg.num_regions)
                      : load_region_map_file(cfg.region_source, zones);
        rgh_ranks = rank_zones_rgh(zones, regions, cfg.n_hubs, cfg.xi);
    }
    RankTable gh_ranks;
    if (scheme_in(cfg.scheme_set, Scheme::gh))
        gh_ranks = rank_zones_gh(zones, cfg.xi);

    // The arrival order is shared by all schemes so their topologies are
    // comparable at equal sizes.
    std::vector<size_t> arrival = arrival_order(zones, cfg.arrival, need_rgh ? &rgh_ranks : nullptr,
                                                need_rgh ? &regions : nullptr, cfg.n_hubs);

    size_t target = cfg.max_size > 0 ? static_cast<size_t>(cfg.max_size) : zones.size();
    if (target > arrival.size()) {
        if (!cfg.repeat_zones)
            fail(Errc::config_error, "max_size exceeds the zone count (set repeat_zones = true "
                                     "to revisit zones)");
        const size_t base = arrival.size();
        for (size_t i = arrival.size(); i < target; ++i)
            arrival.push_back(arrival[i % base]);
    }

    // Size at which the last RGH hub zone has arrived.
    int hubs_present_at = 0;
    if (need_rgh) {
        std::set<std::string> hubs;
        for (const RankAssignment& a : rgh_ranks.assignments())
            if (a.rank <= cfg.n_hubs)
                hubs.insert(a.zone_id);
        std::set<std::string> seen;
        for (size_t pos = 0; pos < arrival.size(); ++pos) {
            const std::string& id = zones.zones[arrival[pos]].zone_id;
            if (hubs.count(id))
                seen.insert(id);
            if (seen.size() == hubs.size()) {
                hubs_present_at = static_cast<int>(pos) + 1;
                break;
            }
        }
        if (rgh_in_set && (hubs_present_at == 0 || static_cast<size_t>(hubs_present_at) > target))
            fail(Errc::config_error, "max_size is too small: not all RGH hub zones arrive");
    }

    std::vector<int> checkpoints = cfg.checkpoints;
    if (checkpoints.empty()) {
        int c0 = rgh_in_set ? hubs_present_at : static_cast<int>(std::min<size_t>(100, target));
        c0 = std::max(c0, 2);
        for (int c = c0; static_cast<size_t>(c) < target; c *= 2)
            checkpoints.push_back(c);
        if (checkpoints.empty() || static_cast<size_t>(checkpoints.back()) < target)
            checkpoints.push_back(static_cast<int>(target));
    } else {
        for (size_t i = 0; i < checkpoints.size(); ++i) {
            if (checkpoints[i] < 2)
                fail(Errc::config_error, "checkpoints must be >= 2");
            if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
                fail(Errc::config_error, "checkpoints must be strictly increasing");
        }
        if (static_cast<size_t>(checkpoints.back()) > target)
            fail(Errc::config_error, "checkpoint exceeds max_size / zone count");
        if (rgh_in_set && checkpoints.front() < hubs_present_at)
            fail(Errc::config_error,
                 "first checkpoint must be >= " + std::to_string(hubs_present_at) +
                     " (all RGH hub zones present)");
    }

    const DelayModel dm = cfg.override_delay_constants ? cfg.delay : DelayModel{};
    const GreedyOptions gopts{cfg.greedy_strict, 0};

    std::vector<MetricsReport> rows;
    auto push_row = [&](MetricsReport r) {
        rows.push_back(std::move(r));
        if (row_sink)
            row_sink(rows.back());
    };

    for (size_t si = 0; si < cfg.scheme_set.size(); ++si) {
        const Scheme scheme = cfg.scheme_set[si];
        const uint64_t scheme_seed = derive_seed(cfg.master_seed, si);
        const RankTable* ranks = scheme == Scheme::gh    ? &gh_ranks
                                 : scheme == Scheme::rgh ? &rgh_ranks
                                                         : nullptr;
        SchemeConfig scfg;
        scfg.scheme = scheme;
        scfg.xi = cfg.xi;
        scfg.m = cfg.m;
        scfg.num_regions = cfg.num_regions;
        scfg.n_hubs = cfg.n_hubs;

        GrowthEngine engine(scfg, ranks);
        size_t pos = 0;
        uint64_t scenario_ordinal = 0;

        for (int cp : checkpoints) {
            while (pos < static_cast<size_t>(cp)) {
                engine.add(zones.zones[arrival[pos]]);
                ++pos;
            }
            const Topology snap = engine.snapshot();

            for (const ScenarioSpec& sc : cfg.scenarios) {
                switch (sc.kind) {
                case ScenarioSpec::Kind::original: {
                    const uint64_t scen_seed = derive_seed(scheme_seed, scenario_ordinal++);
                    const auto ens = make_ensemble(snap, cfg.pair_ensemble, derive_seed(scen_seed, 0));
                    MetricsReport r = evaluate(snap, ens, gopts, dm);
                    r.scenario = "original";
                    r.seed = scen_seed;
                    push_row(std::move(r));
                    break;
                }
                case ScenarioSpec::Kind::single_failures: {
                    const auto failures = enumerate_single_failures(snap);
                    for (const auto kind :
                         {FailureScenario::Kind::one_node, FailureScenario::Kind::one_link}) {
                        const uint64_t scen_seed = derive_seed(scheme_seed, scenario_ordinal++);
                        std::vector<MetricsReport> parts;
                        uint64_t trial = 0;
                        for (const FailureScenario& f : failures) {
                            if (f.kind != kind)
                                continue;
                            const uint64_t trial_seed = derive_seed(scen_seed, trial++);
                            const Topology damaged = apply_failure(snap, f);
                            const auto ens = make_ensemble(damaged, cfg.pair_ensemble,
                                                           derive_seed(trial_seed, 1));
                            parts.push_back(evaluate(damaged, ens, gopts, dm));
                        }
                        if (parts.empty())
                            continue;
                        MetricsReport agg = aggregate(parts);
                        agg.scenario =
                            kind == FailureScenario::Kind::one_node ? "one_node" : "one_link";
                        agg.seed = scen_seed;
                        push_row(std::move(agg));
                    }
                    break;
                }
                case ScenarioSpec::Kind::random_links: {
                    const uint64_t scen_seed = derive_seed(scheme_seed, scenario_ordinal++);
                    std::vector<MetricsReport> parts;
                    parts.reserve(sc.trials);
                    for (int t = 0; t < sc.trials; ++t) {
                        const uint64_t trial_seed = derive_seed(scen_seed, t);
                        const Topology damaged = apply_failure(
                            snap, FailureScenario::random_links(sc.fraction, derive_seed(trial_seed, 0)));
                        const auto ens = make_ensemble(damaged, cfg.pair_ensemble,
                                                       derive_seed(trial_seed, 1));
                        parts.push_back(evaluate(damaged, ens, gopts, dm));
                    }
                    MetricsReport agg = aggregate(parts);
                    agg.scenario = "random_links:" + fmt6(sc.fraction);
                    agg.seed = scen_seed;
                    push_row(std::move(agg));
                    break;
                }
                }
            }
        }
    }
    return rows;
}

std::string format_report_row(const MetricsReport& r) {
    std::ostringstream out;
    out << r.scheme << ',' << r.n << ',' << r.scenario << ',' << r.trials << ','
        << r.connected_pairs << ',' << fmt6(r.disconnected_fraction) << ',' << fmt6(r.sr) << ','
        << fmt6(r.ods_p50) << ',' << fmt6(r.ods_p95) << ',' << fmt6(r.uds_p50) << ','
        << fmt6(r.uds_p95) << ',' << r.seed;
    return out.str();
}

void write_report_csv(const std::vector<MetricsReport>& reports, std::ostream& out) {
    out << kReportHeader << '\n';
    for (const MetricsReport& r : reports)
        out << format_report_row(r) << '\n';
}

void emit_report(const std::vector<MetricsReport>& reports, const ExperimentConfig& cfg,
                 const std::string& path) {
    {
        std::ofstream out(path);
        if (!out)
            fail(Errc::io_error, "cannot write report: " + path);
        write_report_csv(reports, out);
    }
    std::ofstream manifest(path + ".manifest");
    if (!manifest)
        fail(Errc::io_error, "cannot write manifest: " + path + ".manifest");
    manifest << "# run manifest\n";
    manifest << "version = " << kToolVersion << "\n";
    manifest << serialize_config(cfg);
}

} // namespace ggr
