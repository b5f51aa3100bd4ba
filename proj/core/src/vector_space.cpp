#include "gazecorr/vector_space.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gazecorr/error.hpp"

namespace gazecorr {

VectorSpace::Builder::Builder(std::size_t dimensionality, std::string metadata)
    : dimensionality_(dimensionality), metadata_(std::move(metadata)) {
    if (dimensionality_ == 0) {
        throw ConfigError("vector space dimensionality must be positive");
    }
}

void VectorSpace::Builder::add(std::string word, DenseVector vector) {
    if (vector.size() != dimensionality_) {
        throw FormatError("vector for word '" + word + "' has " + std::to_string(vector.size()) +
                          " components, expected " + std::to_string(dimensionality_));
    }
    for (double v : vector) {
        if (!std::isfinite(v)) {
            throw FormatError("vector for word '" + word + "' contains a non-finite value");
        }
    }
    words_.push_back(std::move(word));
    vectors_.push_back(std::move(vector));
}

VectorSpace VectorSpace::Builder::build() && {
    std::vector<std::size_t> order(words_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return words_[a] < words_[b]; });

    std::vector<std::string> words;
    words.reserve(order.size());
    std::vector<double> data;
    data.reserve(order.size() * dimensionality_);
    for (std::size_t idx : order) {
        if (!words.empty() && words.back() == words_[idx]) {
            throw FormatError("duplicate word '" + words_[idx] + "' in vector space");
        }
        words.push_back(std::move(words_[idx]));
        data.insert(data.end(), vectors_[idx].begin(), vectors_[idx].end());
    }
    return VectorSpace(dimensionality_, std::move(metadata_), std::move(words), std::move(data));
}

VectorSpace::VectorSpace(std::size_t dimensionality, std::string metadata,
                         std::vector<std::string> words, std::vector<double> data)
    : dimensionality_(dimensionality),
      metadata_(std::move(metadata)),
      words_(std::move(words)),
      data_(std::move(data)) {}

std::optional<std::size_t> VectorSpace::find(std::string_view word) const {
    auto it = std::lower_bound(words_.begin(), words_.end(), word);
    if (it == words_.end() || *it != word) return std::nullopt;
    return static_cast<std::size_t>(it - words_.begin());
}

std::span<const double> VectorSpace::vector_at(std::size_t index) const {
    return {data_.data() + index * dimensionality_, dimensionality_};
}

std::span<const double> VectorSpace::vector_of(std::string_view word) const {
    auto idx = find(word);
    if (!idx) {
        throw NumericError("word '" + std::string(word) + "' not present in vector space");
    }
    return vector_at(*idx);
}

std::optional<std::size_t> VectorSpace::first_with_prefix(std::string_view prefix) const {
    auto it = std::lower_bound(words_.begin(), words_.end(), prefix);
    if (it == words_.end()) return std::nullopt;
    if (it->size() < prefix.size() || std::string_view(*it).substr(0, prefix.size()) != prefix) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - words_.begin());
}

std::vector<std::string> intersect_vocab(const VectorSpace& a, const VectorSpace& b) {
    std::vector<std::string> out;
    std::set_intersection(a.words().begin(), a.words().end(), b.words().begin(), b.words().end(),
                          std::back_inserter(out));
    return out;
}

} // namespace gazecorr
