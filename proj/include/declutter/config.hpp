#pragma once

// Run configuration: gripper, dish table, workspace, tiers, time model and
// experiment knobs, read from and written to JSON.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "declutter/metrics_time.hpp"

namespace declutter {

struct Config {
    SimParams sim;
    Workspace workspace;
    TimeModel time_model = default_time_model();
    std::vector<double> bin_delays{0.0, 3.0, 5.0};
    double p_fail = 0.0;
    UtensilStacking utensil_stacking = UtensilStacking::OnePerBowl;
    PairSelection pair_selection = PairSelection::Lookahead;
    std::map<Tier, TierConfig> tiers = default_tiers();

    /// Throws Error(InvalidArgument) for a tier missing from the table.
    TierConfig tier(Tier t) const;
    PolicyConfig policy(PolicyKind kind) const;

    /// Parameters fitted by `declutter fit-time` against the reference table.
    static TimeModel default_time_model();
    static std::map<Tier, TierConfig> default_tiers();
};

/// Fields absent from `text` keep their defaults, so a fragment holding only
/// "time_model" is a valid config. Throws Error(SchemaError) on malformed
/// JSON, unknown keys, mistyped or out-of-range values.
Config config_from_json(std::string_view text);
std::string config_to_json(const Config& cfg);

/// Throws Error(IoError) if the file cannot be read.
Config load_config(const std::string& path);

/// $DECLUTTER_CONFIG when set, else config/declutter.json.
std::string default_config_path();

}  // namespace declutter
