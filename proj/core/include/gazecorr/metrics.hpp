#pragma once

#include <span>

namespace gazecorr {

// dot(a,b) / (|a| * |b|), accumulated in double precision left to right so the
// result is reproducible across runs and thread counts. Throws NumericError
// when lengths differ or either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// 1 - cosine_similarity(a, b), in [0, 2].
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Euclidean norm, same summation order policy as the similarity.
double euclidean_norm(std::span<const double> v);

} // namespace gazecorr
