#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ggr/address.hpp"
#include "ggr/geometry.hpp"

namespace ggr {

/// Smallest addressing unit (a city): geolocation plus a centrality score.
/// Every node placed in a zone shares the zone's address verbatim.
struct Zone {
    std::string zone_id;
    std::string name;
    GeoPoint location;
    double score = 1.0; // centrality score, >= 1 (city population here)
};

struct ZoneTable {
    std::vector<Zone> zones;

    size_t size() const { return zones.size(); }
    /// Index of zone_id, or npos.
    size_t index_of(const std::string& zone_id) const;
    static constexpr size_t npos = static_cast<size_t>(-1);
};

/// zone_id -> region_id assignments; complete over a zone table once built.
struct RegionMap {
    std::map<std::string, std::string> zone_to_region;

    const std::string& region_of(const std::string& zone_id) const; // throws missing_region_assignment
    size_t region_count() const;
};

struct RankAssignment {
    std::string zone_id;
    int rank = 0;       // centrality rank t, 1-based
    double radial = 0.0; // ln(xi + rank)
};

/// Rank assignments plus a zone_id lookup.  Built once, then immutable.
class RankTable {
public:
    RankTable() = default;
    explicit RankTable(std::vector<RankAssignment> assignments);

    const std::vector<RankAssignment>& assignments() const { return assignments_; }
    const RankAssignment* find(const std::string& zone_id) const;
    size_t size() const { return assignments_.size(); }

private:
    std::vector<RankAssignment> assignments_;
    std::map<std::string, size_t> by_zone_;
};

struct SchemeConfig {
    Scheme scheme = Scheme::gh;
    double xi = 5.0;     // radial offset, >= 0
    int m = 5;           // attachment count
    int num_regions = 14; // RGH only
    int n_hubs = 5;       // RGH only
};

/// Global centrality ranking: zones sorted by descending score (ties broken
/// by ascending zone_id), rank = 1-based position, radial = ln(xi + rank).
RankTable rank_zones_gh(const ZoneTable& zones, double xi);

/// Regionalized ranking: each region's top min(n_hubs, region size) zones by
/// score form its hub list; the i-th hub of every region gets rank i.  The
/// remaining zones are sorted globally by score and get rank n_hubs + i.
RankTable rank_zones_rgh(const ZoneTable& zones, const RegionMap& regions, int n_hubs, double xi);

/// Scheme address of a zone.  GEO ignores ranks; GH/RGH require a rank
/// assignment for the zone (unranked_zone otherwise).
Address address_of(const Zone& zone, const RankTable* ranks, const SchemeConfig& cfg);

/// Built-in partitioner: sort zones by longitude (ties by zone_id), sweep
/// accumulating score, cut a boundary at every multiple of total/M.  Exactly
/// M non-empty regions, contiguous in longitude; balance is best-effort.
RegionMap partition_regions(const ZoneTable& zones, int num_regions);

/// Region file: header line, then "zone_id,region_id" per line.  Every zone
/// in the table must be assigned; unknown ids are an error.
RegionMap load_region_map(std::istream& in, const ZoneTable& zones);
RegionMap load_region_map_file(const std::string& path, const ZoneTable& zones);
void save_region_map(const RegionMap& map, std::ostream& out);

} // namespace ggr
