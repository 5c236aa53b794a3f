#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ggr/addressing.hpp"
#include "ggr/metrics.hpp"

namespace ggr {

/// Zone file: comma-separated, one zone per line after a required header:
///   zone_id,name,latitude_deg,longitude_deg,population
ZoneTable load_zones(std::istream& in);
ZoneTable load_zones_file(const std::string& path);
void save_zones(const ZoneTable& zones, std::ostream& out);

/// Synthetic zone corpus: Zipf scores (score of rank-t zone = ceil(S/t), so
/// the score law is a power law with exponent 2 in the tail), placement
/// either area-correct uniform on the sphere or clustered around random
/// centers.
struct SyntheticZoneSpec {
    size_t count = 0;
    uint64_t seed = 1;
    enum class Placement { uniform, clustered };
    Placement placement = Placement::uniform;
    int clusters = 8;        // clustered only
    double spread_deg = 5.0; // clustered only: stddev of the angular offset
};

ZoneTable synth_zones(const SyntheticZoneSpec& spec);

struct ArrivalPolicy {
    enum class Kind { deterministic_rank, randomized_proportional };
    Kind kind = Kind::deterministic_rank;
    uint64_t seed = 0;      // randomized only
    bool hubs_first = false; // randomized only: place all RGH hub zones first
};

/// Zone arrival order (indices into the zone table), one node per zone.
/// Deterministic: descending score, ties by zone_id.  Randomized: sequential
/// weighted draws without replacement, optionally after force-placing the
/// RGH hub zones ordered by (hub rank, region id).
std::vector<size_t> arrival_order(const ZoneTable& zones, const ArrivalPolicy& policy,
                                  const RankTable* rgh_ranks, const RegionMap* regions,
                                  int n_hubs);

struct ScenarioSpec {
    enum class Kind { original, single_failures, random_links };
    Kind kind = Kind::original;
    double fraction = 0.2; // random_links
    int trials = 1;        // random_links
};

struct PairMode {
    enum class Kind { automatic, all, sampled };
    Kind kind = Kind::automatic;
    size_t count = 100000;
};

struct ExperimentConfig {
    std::vector<Scheme> scheme_set = {Scheme::geo, Scheme::gh, Scheme::rgh};

    std::string zone_source = "synth"; // "synth" or a file path
    SyntheticZoneSpec synth{.count = 1000};

    std::string region_source = "builtin"; // "builtin" or a file path

    double xi = 5.0;
    int m = 5;
    int num_regions = 14;
    int n_hubs = 5;

    ArrivalPolicy arrival;
    bool repeat_zones = false;

    std::vector<int> checkpoints; // empty = auto (first-all-hubs, then doubling)
    int max_size = 0;             // 0 = all zones

    std::vector<ScenarioSpec> scenarios = {{}};
    PairMode pair_ensemble;

    uint64_t master_seed = 42;
    bool greedy_strict = false;

    bool override_delay_constants = false;
    DelayModel delay; // honored only when override_delay_constants is set
};

/// Key = value config file with the ExperimentConfig keys; '#' comments.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical text form of a resolved config; embedded in the run manifest.
std::string serialize_config(const ExperimentConfig& cfg);

extern const char* const kToolVersion;

/// Run the full experiment: per scheme, grow along the arrival order and at
/// every checkpoint evaluate each scenario.  Rows are handed to row_sink as
/// soon as they are complete (partial results survive an abort).  All
/// randomness derives from master_seed: scheme seed = derive(master, scheme
/// index); scenario seed = derive(scheme seed, scenario ordinal); trial seed
/// = derive(scenario seed, trial index).
std::vector<MetricsReport> run_experiment(const ExperimentConfig& cfg,
                                          const std::function<void(const MetricsReport&)>& row_sink = {});

/// CSV emission: fixed header, 6 significant digits, plus a side-car
/// manifest (path + ".manifest") recording the resolved config and version.
extern const char* const kReportHeader;
std::string format_report_row(const MetricsReport& r);
void write_report_csv(const std::vector<MetricsReport>& reports, std::ostream& out);
void emit_report(const std::vector<MetricsReport>& reports, const ExperimentConfig& cfg,
                 const std::string& path);

} // namespace ggr
