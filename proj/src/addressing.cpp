#include "ggr/addressing.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ggr/errors.hpp"

namespace ggr {

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::geo: return "GEO";
    case Scheme::gh: return "GH";
    case Scheme::rgh: return "RGH";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "GEO")
        return Scheme::geo;
    if (name == "GH")
        return Scheme::gh;
    if (name == "RGH")
        return Scheme::rgh;
    fail(Errc::config_error, "unknown scheme: " + name);
}

size_t ZoneTable::index_of(const std::string& zone_id) const {
    for (size_t i = 0; i < zones.size(); ++i)
        if (zones[i].zone_id == zone_id)
            return i;
    return npos;
}

const std::string& RegionMap::region_of(const std::string& zone_id) const {
    auto it = zone_to_region.find(zone_id);
    if (it == zone_to_region.end())
        fail(Errc::missing_region_assignment, "zone has no region assignment: " + zone_id);
    return it->second;
}

size_t RegionMap::region_count() const {
    std::set<std::string> regions;
    for (const auto& [_, r] : zone_to_region)
        regions.insert(r);
    return regions.size();
}

RankTable::RankTable(std::vector<RankAssignment> assignments)
    : assignments_(std::move(assignments)) {
    for (size_t i = 0; i < assignments_.size(); ++i)
        by_zone_.emplace(assignments_[i].zone_id, i);
}

const RankAssignment* RankTable::find(const std::string& zone_id) const {
    auto it = by_zone_.find(zone_id);
    return it == by_zone_.end() ? nullptr : &assignments_[it->second];
}

namespace {

// Descending score, ties by ascending zone_id.
struct ByCentrality {
    const std::vector<Zone>& zones;
    bool operator()(size_t a, size_t b) const {
        if (zones[a].score != zones[b].score)
            return zones[a].score > zones[b].score;
        return zones[a].zone_id < zones[b].zone_id;
    }
};

double radial_of(double xi, int rank) {
    return std::log(xi + static_cast<double>(rank));
}

} // namespace

RankTable rank_zones_gh(const ZoneTable& zones, double xi) {
    if (zones.zones.empty())
        fail(Errc::empty_table, "cannot rank an empty zone table");
    std::vector<size_t> order(zones.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), ByCentrality{zones.zones});

    std::vector<RankAssignment> out;
    out.reserve(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        const int rank = static_cast<int>(i) + 1;
        out.push_back({zones.zones[order[i]].zone_id, rank, radial_of(xi, rank)});
    }
    return RankTable(std::move(out));
}

RankTable rank_zones_rgh(const ZoneTable& zones, const RegionMap& regions, int n_hubs, double xi) {
    if (zones.zones.empty())
        fail(Errc::empty_table, "cannot rank an empty zone table");
    assert(n_hubs >= 1);

    // Group zone indices by region; region_of throws on unassigned zones.
    std::map<std::string, std::vector<size_t>> by_region;
    for (size_t i = 0; i < zones.size(); ++i)
        by_region[regions.region_of(zones.zones[i].zone_id)].push_back(i);

    std::vector<RankAssignment> out;
    out.reserve(zones.size());
    std::set<size_t> is_hub;

    // Hub lists, regions in ascending region_id order; the i-th hub of every
    // region gets the same rank i.
    for (auto& [region_id, members] : by_region) {
        if (members.empty())
            fail(Errc::empty_region, "region has no zones: " + region_id);
        std::sort(members.begin(), members.end(), ByCentrality{zones.zones});
        const size_t hubs = std::min<size_t>(n_hubs, members.size());
        for (size_t i = 0; i < hubs; ++i) {
            const int rank = static_cast<int>(i) + 1;
            out.push_back({zones.zones[members[i]].zone_id, rank, radial_of(xi, rank)});
            is_hub.insert(members[i]);
        }
    }

    // Remaining zones: global descending-score order, ranks offset by n_hubs.
    std::vector<size_t> residual;
    for (size_t i = 0; i < zones.size(); ++i)
        if (!is_hub.count(i))
            residual.push_back(i);
    std::sort(residual.begin(), residual.end(), ByCentrality{zones.zones});
    for (size_t i = 0; i < residual.size(); ++i) {
        const int rank = n_hubs + static_cast<int>(i) + 1;
        out.push_back({zones.zones[residual[i]].zone_id, rank, radial_of(xi, rank)});
    }
    return RankTable(std::move(out));
}

Address address_of(const Zone& zone, const RankTable* ranks, const SchemeConfig& cfg) {
    if (cfg.scheme == Scheme::geo)
        return Address::geo(zone.location);
    const RankAssignment* a = ranks ? ranks->find(zone.zone_id) : nullptr;
    if (!a)
        fail(Errc::unranked_zone, "no rank assignment for zone: " + zone.zone_id);
    return Address::hyper(a->radial, zone.location);
}

RegionMap partition_regions(const ZoneTable& zones, int num_regions) {
    if (num_regions < 1)
        fail(Errc::config_error, "num_regions must be >= 1");
    const size_t q = zones.size();
    if (static_cast<size_t>(num_regions) > q)
        fail(Errc::too_many_regions, "more regions than zones");

    std::vector<size_t> order(q);
    for (size_t i = 0; i < q; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (zones.zones[a].location.phi != zones.zones[b].location.phi)
            return zones.zones[a].location.phi < zones.zones[b].location.phi;
        return zones.zones[a].zone_id < zones.zones[b].zone_id;
    });

    double total = 0.0;
    for (const Zone& z : zones.zones)
        total += z.score;
    const double step = total / num_regions;

    const int pad = static_cast<int>(std::to_string(num_regions - 1).size());
    auto region_name = [pad](int k) {
        std::string digits = std::to_string(k);
        return "r" + std::string(pad - static_cast<int>(digits.size()), '0') + digits;
    };

    RegionMap map;
    double cum = 0.0;
    int prev = -1;
    for (size_t i = 0; i < q; ++i) {
        int k = std::min(num_regions - 1, static_cast<int>(std::floor(cum / step)));
        k = std::min(k, prev + 1);                             // never skip a region
        k = std::max(k, prev);                                 // monotone sweep
        k = std::max(k, num_regions - static_cast<int>(q - i)); // keep the rest non-empty
        map.zone_to_region[zones.zones[order[i]].zone_id] = region_name(k);
        cum += zones.zones[order[i]].score;
        prev = k;
    }
    return map;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

} // namespace

RegionMap load_region_map(std::istream& in, const ZoneTable& zones) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("zone_id", 0) != 0)
        fail(Errc::parse_error, "region file: missing header line");

    RegionMap map;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            fail(Errc::parse_error,
                 "region file line " + std::to_string(line_no) + ": expected zone_id,region_id");
        if (zones.index_of(fields[0]) == ZoneTable::npos)
            fail(Errc::unknown_zone, "region file line " + std::to_string(line_no) +
                                         ": unknown zone " + fields[0]);
        map.zone_to_region[fields[0]] = fields[1];
    }
    for (const Zone& z : zones.zones)
        if (!map.zone_to_region.count(z.zone_id))
            fail(Errc::unassigned_zone, "zone not assigned to any region: " + z.zone_id);
    return map;
}

RegionMap load_region_map_file(const std::string& path, const ZoneTable& zones) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::io_error, "cannot open region file: " + path);
    return load_region_map(in, zones);
}

void save_region_map(const RegionMap& map, std::ostream& out) {
    out << "zone_id,region_id\n";
    for (const auto& [zone, region] : map.zone_to_region)
        out << zone << ',' << region << '\n';
}

} // namespace ggr
