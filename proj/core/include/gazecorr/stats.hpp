#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gazecorr/vector_space.hpp"

namespace gazecorr {

enum class PValueMethod { TApproximation, Permutation };

struct CorrelationResult {
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    PValueMethod method = PValueMethod::TApproximation;
    // Set for the permutation method: number of permutations evaluated
    // (n! when the test enumerated exhaustively).
    std::optional<std::uint64_t> permutations_used;
};

// Average-rank (midrank) assignment, 1-based. Ties share the mean of the
// positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho: Pearson correlation of midranks. Midranks are half-integers,
// so the rank sums are carried in exact integer arithmetic; perfectly monotone
// inputs yield exactly +-1.0. Throws on length mismatch (ConfigError) and on a
// constant sequence (NumericError).
double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided significance test for Spearman's rho.
//
// TApproximation: t = rho * sqrt((n-2) / (1 - rho^2)) against Student's t with
// n-2 degrees of freedom; requires n >= 3.
//
// Permutation: shuffles y with a generator seeded by `seed` and counts
// |rho_perm| >= |rho_observed|, p = (count + 1) / (permutations + 1). When n!
// does not exceed the requested permutation count the test enumerates all n!
// pairings instead and reports the exact p = count / n!. The comparison runs
// on integer rank statistics, so it is free of floating-point boundary
// effects. Requires permutations >= 100.
CorrelationResult spearman_test(std::span<const double> x, std::span<const double> y,
                                PValueMethod method, std::uint64_t permutations = 10000,
                                std::uint64_t seed = 42);

// Regularized incomplete beta and the Student t CDF built on it.
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

struct OlsModel {
    DenseVector weights;
    double intercept = 0.0;
};

// Least squares via the intercept-augmented normal equations, factored once so
// repeated fits against the same design (permutation tests) reuse the
// decomposition. Falls back to a small ridge (1e-8 * trace / dim) when the
// Gram matrix is numerically singular.
class OlsSolver {
public:
    explicit OlsSolver(const std::vector<DenseVector>& rows);

    std::size_t rows() const noexcept { return n_; }
    std::size_t predictors() const noexcept { return dim_; }

    OlsModel fit(std::span<const double> y) const;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> x_;    // row-major n_ x dim_
    std::vector<double> chol_; // lower-triangular factor of the augmented Gram
};

OlsModel ols_fit(const std::vector<DenseVector>& x, std::span<const double> y);

double predict(const OlsModel& model, std::span<const double> x);

// Mean squared residual of the model over the given rows.
double mse(const OlsModel& model, const std::vector<DenseVector>& x, std::span<const double> y);

} // namespace gazecorr
