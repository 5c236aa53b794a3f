#pragma once

#include <stdexcept>
#include <string>

namespace ggr {

enum class Errc {
    // addressing
    empty_table,
    missing_region_assignment,
    empty_region,
    too_many_regions,
    unranked_zone,
    unknown_zone,
    unassigned_zone,
    // topology / routing
    no_such_node,
    no_such_link,
    // metrics
    empty_ensemble,
    too_few_nodes,
    mixed_schemes,
    // ingestion / config
    parse_error,
    invalid_latitude,
    invalid_population,
    duplicate_zone_id,
    config_error,
    io_error,
};

class SimError : public std::runtime_error {
public:
    SimError(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw SimError(code, what);
}

} // namespace ggr
