#include "gazecorr/gaze_features.hpp"

namespace gazecorr {

namespace {

constexpr std::array<GazeFeatureInfo, kGazeFeatureCount> kTable = {{
    {GazeFeature::DwellTimeTotal, "dwell_time_total", FeatureKind::Continuous, true},
    {GazeFeature::FirstFixationDuration, "first_fixation_duration", FeatureKind::Continuous, true},
    {GazeFeature::FirstRunDwellTime, "first_run_dwell_time", FeatureKind::Continuous, true},
    {GazeFeature::FirstRunFixationCount, "first_run_fixation_count", FeatureKind::Continuous, true},
    {GazeFeature::TotalFixationCount, "total_fixation_count", FeatureKind::Continuous, true},
    {GazeFeature::PrecededByPriorArea, "preceded_by_prior_area", FeatureKind::Logical, false},
    {GazeFeature::RegressionIn, "regression_in", FeatureKind::Logical, false},
    {GazeFeature::RegressionOut, "regression_out", FeatureKind::Logical, false},
    {GazeFeature::GoPastTime, "go_past_time", FeatureKind::Continuous, true},
    {GazeFeature::SecondRunDwellTime, "second_run_dwell_time", FeatureKind::Continuous, true},
    {GazeFeature::FirstPassSkip, "first_pass_skip", FeatureKind::Logical, false},
    {GazeFeature::SpilloverFirstFixation, "spillover_first_fixation", FeatureKind::Continuous,
     true},
    {GazeFeature::LandingPosition, "landing_position", FeatureKind::Continuous, false},
    {GazeFeature::IncomingSaccadeDirection, "incoming_saccade_direction", FeatureKind::Logical,
     false},
    {GazeFeature::FixatedCharacter, "fixated_character", FeatureKind::Continuous, false},
    {GazeFeature::FixatedOnce, "fixated_once", FeatureKind::Logical, false},
    {GazeFeature::FixatedTwoOrMore, "fixated_two_or_more", FeatureKind::Logical, false},
}};

} // namespace

const std::array<GazeFeatureInfo, kGazeFeatureCount>& gaze_feature_table() { return kTable; }

const GazeFeatureInfo& feature_info(GazeFeature id) {
    return kTable[static_cast<std::size_t>(id)];
}

std::string_view feature_name(GazeFeature id) { return feature_info(id).name; }

std::optional<GazeFeature> parse_gaze_feature(std::string_view name) {
    for (const auto& info : kTable) {
        if (info.name == name) return info.id;
    }
    return std::nullopt;
}

} // namespace gazecorr
