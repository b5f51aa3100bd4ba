#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gazecorr {

// The 17 canonical per-interest-area reading measures, in fixed order: vector
// component i always refers to feature i of this enumeration.
enum class GazeFeature : std::uint8_t {
    DwellTimeTotal = 0,        // ms, total duration of all fixations in the area
    FirstFixationDuration,     // ms
    FirstRunDwellTime,         // ms
    FirstRunFixationCount,     // count
    TotalFixationCount,        // count
    PrecededByPriorArea,       // logical
    RegressionIn,              // logical
    RegressionOut,             // logical
    GoPastTime,                // ms
    SecondRunDwellTime,        // ms
    FirstPassSkip,             // logical
    SpilloverFirstFixation,    // ms
    LandingPosition,           // characters
    IncomingSaccadeDirection,  // logical, pre-binarized by the source config
    FixatedCharacter,          // character index
    FixatedOnce,               // logical
    FixatedTwoOrMore,          // logical
};

inline constexpr std::size_t kGazeFeatureCount = 17;

enum class FeatureKind { Continuous, Logical };

struct GazeFeatureInfo {
    GazeFeature id;
    std::string_view name;
    FeatureKind kind;
    bool nonnegative; // durations and counts must be >= 0
};

const std::array<GazeFeatureInfo, kGazeFeatureCount>& gaze_feature_table();

const GazeFeatureInfo& feature_info(GazeFeature id);
std::string_view feature_name(GazeFeature id);
std::optional<GazeFeature> parse_gaze_feature(std::string_view name);

} // namespace gazecorr
