#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazecorr/vector_space.hpp"

namespace gazecorr {

// Text interchange format: first line "<vocab_count> <dimensionality>", then
// one "<word> <v1> ... <vd>" line per word, UTF-8, space separated. Doubles
// are written with shortest round-trip formatting, so save/load is
// value-identical.
VectorSpace load_text(const std::filesystem::path& path);
void save_text(const VectorSpace& space, const std::filesystem::path& path);

// Binary variant: same ASCII header line, then per word the word bytes
// terminated by a single space followed by dimensionality 4-byte IEEE-754
// little-endian floats. A trailing newline per record is written and
// tolerated on read. Floats are widened to double internally.
VectorSpace load_binary(const std::filesystem::path& path);
void save_binary(const VectorSpace& space, const std::filesystem::path& path);

// Vocabulary resolution for POS-tagged key sets. Tries the word itself
// (lowercased first when configured), then word_TAG for each tag in priority
// order, then — only when the fallback flag is set — the lexicographically
// first key starting with "word_".
struct LookupPolicy {
    bool lowercase = false;
    std::vector<std::string> pos_priority;
    bool fallback_any_suffix = false;
};

std::optional<std::size_t> lookup(const VectorSpace& space, std::string_view word,
                                  const LookupPolicy& policy);

} // namespace gazecorr
