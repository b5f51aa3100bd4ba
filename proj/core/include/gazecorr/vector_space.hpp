#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazecorr {

using DenseVector = std::vector<double>;

// Immutable word-keyed collection of fixed-dimension dense vectors. Words are
// kept sorted, so iteration order, vocabulary intersection and prefix lookups
// are deterministic. Concurrent reads are safe.
class VectorSpace {
public:
    class Builder {
    public:
        explicit Builder(std::size_t dimensionality, std::string metadata = {});

        // Validates the vector length and that all components are finite.
        void add(std::string word, DenseVector vector);
        std::size_t size() const noexcept { return words_.size(); }

        // Sorts entries by word and rejects duplicates.
        VectorSpace build() &&;

    private:
        std::size_t dimensionality_;
        std::string metadata_;
        std::vector<std::string> words_;
        std::vector<DenseVector> vectors_;
    };

    std::size_t dimensionality() const noexcept { return dimensionality_; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::string& metadata() const noexcept { return metadata_; }

    // Sorted lexicographically by byte value.
    const std::vector<std::string>& words() const noexcept { return words_; }

    std::optional<std::size_t> find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word).has_value(); }

    std::span<const double> vector_at(std::size_t index) const;

    // Throws NumericError if the word is absent.
    std::span<const double> vector_of(std::string_view word) const;

    // Index of the first word with the given prefix, if any.
    std::optional<std::size_t> first_with_prefix(std::string_view prefix) const;

private:
    VectorSpace(std::size_t dimensionality, std::string metadata, std::vector<std::string> words,
                std::vector<double> data);

    std::size_t dimensionality_ = 0;
    std::string metadata_;
    std::vector<std::string> words_;
    std::vector<double> data_; // row-major, words_.size() x dimensionality_
};

// Sorted list of words present in both spaces.
std::vector<std::string> intersect_vocab(const VectorSpace& a, const VectorSpace& b);

} // namespace gazecorr
