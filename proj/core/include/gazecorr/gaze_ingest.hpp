#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazecorr/gaze_features.hpp"
#include "gazecorr/vector_space.hpp"

namespace gazecorr {

enum class Delimiter { Auto, Comma, Tab };

// Maps source file columns onto the canonical feature set. Corpora publish the
// same measures under different headers, so the mapping is external
// configuration. Only mapped features contribute vector components; the
// emitted dimensionality equals the number of mapped features.
struct ColumnConfig {
    std::string participant_column;
    std::string token_column;
    std::optional<std::string> lemma_column;
    // Kept in canonical feature order regardless of config file order.
    std::vector<std::pair<GazeFeature, std::string>> feature_columns;
    std::vector<std::string> missing_markers{"", "NA", "."};
    Delimiter delimiter = Delimiter::Auto;
};

// Flat INI-style file with sections [columns], [features], [missing_markers]
// and [options]; see README for the full key list.
ColumnConfig load_column_config(const std::filesystem::path& path);

// One participant's measurements for one interest area. Absent slots are
// legitimate (a skipped word has no fixation durations).
struct GazeObservation {
    std::string participant_id;
    std::string token;
    std::string lemma;
    std::array<std::optional<double>, kGazeFeatureCount> features;
};

struct ParsedCorpus {
    std::vector<GazeObservation> observations;
    std::size_t skipped_rows = 0; // only under lenient parsing
};

// Parses a delimited corpus export. Logical features accept
// 0/1/true/false/yes/no case-insensitively; duration and count features must
// be nonnegative. Cells matching a missing marker become absent values. When
// no lemma column is configured the lemma is the ASCII-lowercased token.
// Malformed rows throw FormatError with the line number, or are counted and
// skipped when lenient is set.
ParsedCorpus parse_corpus(std::istream& in, const ColumnConfig& config, bool lenient = false);
ParsedCorpus parse_corpus_file(const std::filesystem::path& path, const ColumnConfig& config,
                               bool lenient = false);

struct TokenKey {
    std::string lemma;
    std::string token;
    auto operator<=>(const TokenKey&) const = default;
};

using FeatureMeans = std::array<std::optional<double>, kGazeFeatureCount>;

// Arithmetic mean per token and feature over the observations where the
// feature is present. Observations are brought into a canonical order first,
// so the result is bit-identical under input row shuffles.
std::map<TokenKey, FeatureMeans> average_over_participants(std::vector<GazeObservation> obs);

// Unweighted mean of token-level means per lemma, over tokens where the
// feature is present.
std::map<std::string, FeatureMeans> aggregate_tokens_to_lemmas(
    const std::map<TokenKey, FeatureMeans>& token_means);

struct GazeSpace {
    VectorSpace space;
    std::vector<GazeFeature> feature_order; // component i of every vector
    std::size_t dropped_lemmas = 0;         // lemmas missing some mapped feature
    std::size_t skipped_rows = 0;
};

// Min-max scales each mapped feature to [-1, 1] over the retained lemmas;
// constant features map to 0. Lemmas still missing a mapped feature after
// aggregation are dropped and counted.
GazeSpace normalize_features(const std::map<std::string, FeatureMeans>& lemma_means,
                             const std::vector<GazeFeature>& mapped_features,
                             std::string metadata);

// parse -> average over participants -> aggregate to lemmas -> normalize.
GazeSpace build_gaze_space(const std::filesystem::path& path, const ColumnConfig& config,
                           bool lenient = false);

} // namespace gazecorr
