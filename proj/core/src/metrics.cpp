#include "gazecorr/metrics.hpp"

#include <cmath>
#include <string>

#include "gazecorr/error.hpp"

namespace gazecorr {

namespace {

void check_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw NumericError("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
    }
}

} // namespace

double euclidean_norm(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    check_same_length(a, b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw NumericError("cosine of a zero-norm vector is undefined");
    }
    double sim = dot / (std::sqrt(na) * std::sqrt(nb));
    // Rounding can push the quotient a hair outside [-1, 1].
    if (sim > 1.0) sim = 1.0;
    if (sim < -1.0) sim = -1.0;
    return sim;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    return 1.0 - cosine_similarity(a, b);
}

} // namespace gazecorr
