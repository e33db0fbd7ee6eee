#pragma once

// Byte-stable JSON for scenes, trace events and trial reports. Writers emit
// fields in a fixed order with six decimals; readers accept any key order.

#include <string>
#include <string_view>

#include "declutter/metrics_time.hpp"

namespace declutter {

/// Fixed-point with six decimals; negative zero prints as zero.
std::string format_fixed(double v, int decimals = 6);

std::string scene_to_json(const SceneState& state);

/// Throws Error(SchemaError) on malformed JSON, missing or mistyped fields,
/// unknown dish kinds or tiers, and scenes that fail validate().
SceneState scene_from_json(std::string_view text, const DishSpecs& specs = {});

/// One JSONL record (no trailing newline).
std::string trace_event_to_json(const TraceEvent& event);

std::string trace_to_jsonl(const std::vector<TraceEvent>& events);

std::string report_to_json(const TrialReport& report);

}  // namespace declutter
