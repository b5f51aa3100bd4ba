#include "gazecorr/gaze_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "gazecorr/error.hpp"

namespace gazecorr {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

// Splits one line on the delimiter. Fields may be wrapped in double quotes;
// doubled quotes inside a quoted field decode to a literal quote.
std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string current;
    std::size_t i = 0;
    while (true) {
        current.clear();
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (i < line.size()) {
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        current.push_back('"');
                        i += 2;
                    } else {
                        ++i;
                        break;
                    }
                } else {
                    current.push_back(line[i]);
                    ++i;
                }
            }
        } else {
            while (i < line.size() && line[i] != delim) {
                current.push_back(line[i]);
                ++i;
            }
        }
        fields.push_back(current);
        if (i >= line.size()) break;
        ++i; // past the delimiter
        if (i == line.size()) {
            fields.emplace_back();
            break;
        }
    }
    return fields;
}

struct RowError {
    std::string message;
};

double parse_numeric_cell(const std::string& cell, const GazeFeatureInfo& info) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw RowError{"cannot parse '" + cell + "' as a number for feature " +
                       std::string(info.name)};
    }
    if (info.kind == FeatureKind::Logical) {
        if (value != 0.0 && value != 1.0) {
            throw RowError{"logical feature " + std::string(info.name) + " must be 0 or 1, got '" +
                           cell + "'"};
        }
    } else if (info.nonnegative && value < 0.0) {
        throw RowError{"feature " + std::string(info.name) + " must be nonnegative, got '" + cell +
                       "'"};
    }
    return value;
}

double parse_feature_cell(const std::string& cell, const GazeFeatureInfo& info) {
    if (info.kind == FeatureKind::Logical) {
        const std::string low = ascii_lower(cell);
        if (low == "true" || low == "yes") return 1.0;
        if (low == "false" || low == "no") return 0.0;
    }
    return parse_numeric_cell(cell, info);
}

// Total order over full observation content so equal-content rows are
// interchangeable and accumulation order does not depend on input order.
bool observation_less(const GazeObservation& a, const GazeObservation& b) {
    if (auto c = a.participant_id.compare(b.participant_id); c != 0) return c < 0;
    if (auto c = a.token.compare(b.token); c != 0) return c < 0;
    if (auto c = a.lemma.compare(b.lemma); c != 0) return c < 0;
    for (std::size_t i = 0; i < kGazeFeatureCount; ++i) {
        const auto& x = a.features[i];
        const auto& y = b.features[i];
        if (x.has_value() != y.has_value()) return !x.has_value();
        if (x && y && *x != *y) return *x < *y;
    }
    return false;
}

std::string section_key(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

} // namespace

ColumnConfig load_column_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }

    ColumnConfig config;
    bool markers_overridden = false;
    std::vector<std::string> markers;
    std::map<GazeFeature, std::string> features;

    std::string section;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') fail("unterminated section header");
            section = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
            if (section != "columns" && section != "features" && section != "missing_markers" &&
                section != "options") {
                fail("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) fail("empty key");

        if (section == "columns") {
            if (key == "participant") {
                config.participant_column = value;
            } else if (key == "token") {
                config.token_column = value;
            } else if (key == "lemma") {
                config.lemma_column = value;
            } else {
                fail("unknown key '" + section_key(section, key) + "'");
            }
        } else if (section == "features") {
            const auto feature = parse_gaze_feature(key);
            if (!feature) fail("unknown feature '" + key + "'");
            if (features.count(*feature)) fail("feature '" + key + "' mapped twice");
            if (value.empty()) fail("feature '" + key + "' has no source column");
            features[*feature] = value;
        } else if (section == "missing_markers") {
            if (key != "marker") fail("unknown key '" + section_key(section, key) + "'");
            markers_overridden = true;
            markers.push_back(value);
        } else if (section == "options") {
            if (key == "delimiter") {
                if (value == "auto") {
                    config.delimiter = Delimiter::Auto;
                } else if (value == "comma") {
                    config.delimiter = Delimiter::Comma;
                } else if (value == "tab") {
                    config.delimiter = Delimiter::Tab;
                } else {
                    fail("delimiter must be auto, comma or tab");
                }
            } else {
                fail("unknown key '" + section_key(section, key) + "'");
            }
        } else {
            fail("key outside of any section");
        }
    }

    if (config.participant_column.empty()) {
        throw ConfigError(path.string() + ": [columns] participant is required");
    }
    if (config.token_column.empty()) {
        throw ConfigError(path.string() + ": [columns] token is required");
    }
    if (features.empty()) {
        throw ConfigError(path.string() + ": [features] must map at least one feature");
    }
    for (const auto& info : gaze_feature_table()) {
        auto it = features.find(info.id);
        if (it != features.end()) config.feature_columns.emplace_back(info.id, it->second);
    }
    if (markers_overridden) config.missing_markers = std::move(markers);
    return config;
}

ParsedCorpus parse_corpus(std::istream& in, const ColumnConfig& config, bool lenient) {
    if (config.feature_columns.empty()) {
        throw ConfigError("column config maps no features");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("corpus file is empty, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    char delim = ',';
    switch (config.delimiter) {
        case Delimiter::Comma: delim = ','; break;
        case Delimiter::Tab: delim = '\t'; break;
        case Delimiter::Auto: delim = line.find('\t') != std::string::npos ? '\t' : ','; break;
    }

    const auto header = split_delimited(line, delim);
    auto column_index = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ConfigError("configured column '" + name + "' not found in header");
        }
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t participant_col = column_index(config.participant_column);
    const std::size_t token_col = column_index(config.token_column);
    std::optional<std::size_t> lemma_col;
    if (config.lemma_column) lemma_col = column_index(*config.lemma_column);
    std::vector<std::pair<GazeFeature, std::size_t>> feature_cols;
    feature_cols.reserve(config.feature_columns.size());
    for (const auto& [feature, column] : config.feature_columns) {
        feature_cols.emplace_back(feature, column_index(column));
    }

    auto is_missing = [&](const std::string& cell) {
        return std::find(config.missing_markers.begin(), config.missing_markers.end(), cell) !=
               config.missing_markers.end();
    };

    ParsedCorpus result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            const auto fields = split_delimited(line, delim);
            if (fields.size() != header.size()) {
                throw RowError{"row has " + std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(header.size())};
            }
            GazeObservation obs;
            obs.participant_id = fields[participant_col];
            obs.token = fields[token_col];
            if (obs.token.empty()) throw RowError{"empty token cell"};
            if (obs.participant_id.empty()) throw RowError{"empty participant cell"};
            obs.lemma = lemma_col ? fields[*lemma_col] : ascii_lower(obs.token);
            if (obs.lemma.empty()) throw RowError{"empty lemma cell"};

            bool any_present = false;
            for (const auto& [feature, col] : feature_cols) {
                const std::string& cell = fields[col];
                if (is_missing(cell)) continue;
                obs.features[static_cast<std::size_t>(feature)] =
                    parse_feature_cell(cell, feature_info(feature));
                any_present = true;
            }
            if (!any_present) throw RowError{"every mapped feature is missing"};
            result.observations.push_back(std::move(obs));
        } catch (const RowError& err) {
            if (lenient) {
                ++result.skipped_rows;
                continue;
            }
            throw FormatError("line " + std::to_string(line_no) + ": " + err.message);
        }
    }
    return result;
}

ParsedCorpus parse_corpus_file(const std::filesystem::path& path, const ColumnConfig& config,
                               bool lenient) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open corpus file '" + path.string() + "'");
    }
    try {
        return parse_corpus(in, config, lenient);
    } catch (const FormatError& err) {
        throw FormatError(path.string() + ": " + err.what());
    }
}

std::map<TokenKey, FeatureMeans> average_over_participants(std::vector<GazeObservation> obs) {
    std::sort(obs.begin(), obs.end(), observation_less);

    struct Accum {
        std::array<double, kGazeFeatureCount> sum{};
        std::array<std::size_t, kGazeFeatureCount> count{};
    };
    std::map<TokenKey, Accum> groups;
    for (const auto& o : obs) {
        auto& acc = groups[TokenKey{o.lemma, o.token}];
        for (std::size_t i = 0; i < kGazeFeatureCount; ++i) {
            if (o.features[i]) {
                acc.sum[i] += *o.features[i];
                acc.count[i] += 1;
            }
        }
    }

    std::map<TokenKey, FeatureMeans> means;
    for (const auto& [key, acc] : groups) {
        FeatureMeans m;
        for (std::size_t i = 0; i < kGazeFeatureCount; ++i) {
            if (acc.count[i] > 0) m[i] = acc.sum[i] / static_cast<double>(acc.count[i]);
        }
        means.emplace(key, m);
    }
    return means;
}

std::map<std::string, FeatureMeans> aggregate_tokens_to_lemmas(
    const std::map<TokenKey, FeatureMeans>& token_means) {
    struct Accum {
        std::array<double, kGazeFeatureCount> sum{};
        std::array<std::size_t, kGazeFeatureCount> count{};
    };
    std::map<std::string, Accum> groups;
    for (const auto& [key, means] : token_means) {
        auto& acc = groups[key.lemma];
        for (std::size_t i = 0; i < kGazeFeatureCount; ++i) {
            if (means[i]) {
                acc.sum[i] += *means[i];
                acc.count[i] += 1;
            }
        }
    }

    std::map<std::string, FeatureMeans> out;
    for (const auto& [lemma, acc] : groups) {
        FeatureMeans m;
        for (std::size_t i = 0; i < kGazeFeatureCount; ++i) {
            if (acc.count[i] > 0) m[i] = acc.sum[i] / static_cast<double>(acc.count[i]);
        }
        out.emplace(lemma, m);
    }
    return out;
}

GazeSpace normalize_features(const std::map<std::string, FeatureMeans>& lemma_means,
                             const std::vector<GazeFeature>& mapped_features,
                             std::string metadata) {
    if (lemma_means.empty()) {
        throw FormatError("no lemmas to normalize: corpus produced no aggregated data");
    }
    if (mapped_features.empty()) {
        throw ConfigError("no mapped features to normalize");
    }

    // Only lemmas with every mapped feature present become vectors; min/max
    // ranges are computed over those, so non-constant features attain both -1
    // and +1 exactly.
    std::vector<const std::pair<const std::string, FeatureMeans>*> retained;
    retained.reserve(lemma_means.size());
    for (const auto& entry : lemma_means) {
        const bool complete =
            std::all_of(mapped_features.begin(), mapped_features.end(), [&](GazeFeature f) {
                return entry.second[static_cast<std::size_t>(f)].has_value();
            });
        if (complete) retained.push_back(&entry);
    }

    const std::size_t dropped = lemma_means.size() - retained.size();
    if (retained.empty()) {
        throw FormatError("every lemma is missing at least one mapped feature; nothing to emit");
    }

    const std::size_t dim = mapped_features.size();
    std::vector<double> lo(dim, 0.0), hi(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        const auto f = static_cast<std::size_t>(mapped_features[j]);
        lo[j] = hi[j] = *retained.front()->second[f];
        for (const auto* entry : retained) {
            const double v = *entry->second[f];
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
    }

    VectorSpace::Builder builder(dim, std::move(metadata));
    DenseVector vec(dim);
    for (const auto* entry : retained) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto f = static_cast<std::size_t>(mapped_features[j]);
            const double v = *entry->second[f];
            vec[j] = hi[j] > lo[j] ? 2.0 * (v - lo[j]) / (hi[j] - lo[j]) - 1.0 : 0.0;
        }
        builder.add(entry->first, vec);
    }
    result.space = std::move(builder).build();
    return result;
}

GazeSpace build_gaze_space(const std::filesystem::path& path, const ColumnConfig& config,
                           bool lenient) {
    auto parsed = parse_corpus_file(path, config, lenient);
    if (parsed.observations.empty()) {
        throw FormatError(path.string() + ": corpus contains no usable observations");
    }
    auto token_means = average_over_participants(std::move(parsed.observations));
    auto lemma_means = aggregate_tokens_to_lemmas(token_means);

    std::vector<GazeFeature> mapped;
    mapped.reserve(config.feature_columns.size());
    for (const auto& [feature, column] : config.feature_columns) mapped.push_back(feature);

    std::string meta = "gaze space from " + path.filename().string() + "; features:";
    for (const auto f : mapped) {
        meta += ' ';
        meta += feature_name(f);
    }

    auto result = normalize_features(lemma_means, mapped, std::move(meta));
    result.skipped_rows = parsed.skipped_rows;
    return result;
}

} // namespace gazecorr
