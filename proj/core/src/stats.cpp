#include "gazecorr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "gazecorr/error.hpp"
#include "gazecorr/rng.hpp"

namespace gazecorr {

namespace {

using int128 = __int128;

// Midranks scaled by 2, which makes them integers: a run of tied values
// occupying sorted positions i..j (1-based) gets doubled rank i + j.
std::vector<std::int64_t> doubled_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<std::int64_t> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const std::int64_t doubled = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
        i = j + 1;
    }
    return ranks;
}

struct RankStats {
    std::vector<std::int64_t> rx, ry;
    std::int64_t sum_x = 0, sum_y = 0;
    int128 dev_x = 0, dev_y = 0; // n * sum(r^2) - sum(r)^2
    int128 num = 0;              // n * sum(rx*ry) - sum(rx) * sum(ry)

    std::size_t n() const { return rx.size(); }
};

int128 cross_term(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    int128 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<int128>(a[i]) * b[i];
    return s;
}

RankStats rank_stats(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ConfigError("sequence length mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
    }
    if (x.size() < 2) {
        throw ConfigError("need at least 2 observations, got " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw NumericError("non-finite value in first sequence");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw NumericError("non-finite value in second sequence");
    }

    RankStats st;
    st.rx = doubled_ranks(x);
    st.ry = doubled_ranks(y);
    const auto n = static_cast<int128>(st.rx.size());
    for (auto r : st.rx) st.sum_x += r;
    for (auto r : st.ry) st.sum_y += r;
    st.dev_x = n * cross_term(st.rx, st.rx) - static_cast<int128>(st.sum_x) * st.sum_x;
    st.dev_y = n * cross_term(st.ry, st.ry) - static_cast<int128>(st.sum_y) * st.sum_y;
    st.num = n * cross_term(st.rx, st.ry) - static_cast<int128>(st.sum_x) * st.sum_y;

    if (st.dev_x == 0) throw NumericError("first sequence is constant, rho undefined");
    if (st.dev_y == 0) throw NumericError("second sequence is constant, rho undefined");
    return st;
}

double rho_from_stats(const RankStats& st) {
    // |rho| = 1 exactly when the rankings coincide (or mirror); detect that
    // case structurally rather than trusting sqrt rounding.
    const std::int64_t reflect = static_cast<std::int64_t>(2 * (st.n() + 1));
    bool identical = true, mirrored = true;
    for (std::size_t i = 0; i < st.n(); ++i) {
        identical = identical && st.rx[i] == st.ry[i];
        mirrored = mirrored && st.ry[i] == reflect - st.rx[i];
    }
    if (identical) return 1.0;
    if (mirrored) return -1.0;

    const double rho = static_cast<double>(st.num) /
                       std::sqrt(static_cast<double>(st.dev_x) * static_cast<double>(st.dev_y));
    return std::clamp(rho, -1.0, 1.0);
}

int128 abs128(int128 v) { return v < 0 ? -v : v; }

std::optional<std::uint64_t> factorial_if_small(std::size_t n, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (f > cap / i) return std::nullopt;
        f *= i;
    }
    return f;
}

double t_two_sided_p(double rho, std::size_t n) {
    if (n < 3) {
        throw NumericError("t approximation needs n >= 3, got " + std::to_string(n));
    }
    const double df = static_cast<double>(n - 2);
    const double denom = 1.0 - rho * rho;
    if (denom <= 0.0) return 0.0;
    const double t = rho * std::sqrt(df / denom);
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

} // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    auto doubled = doubled_ranks(values);
    std::vector<double> out(doubled.size());
    for (std::size_t i = 0; i < doubled.size(); ++i) out[i] = 0.5 * static_cast<double>(doubled[i]);
    return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    return rho_from_stats(rank_stats(x, y));
}

CorrelationResult spearman_test(std::span<const double> x, std::span<const double> y,
                                PValueMethod method, std::uint64_t permutations,
                                std::uint64_t seed) {
    const RankStats st = rank_stats(x, y);
    CorrelationResult result;
    result.rho = rho_from_stats(st);
    result.n = st.n();
    result.method = method;

    if (method == PValueMethod::TApproximation) {
        result.p_value = t_two_sided_p(result.rho, st.n());
        return result;
    }

    if (permutations < 100) {
        throw ConfigError("permutation test needs at least 100 permutations, got " +
                          std::to_string(permutations));
    }

    // The statistic |n*sum(rx*ry(pi)) - sum(rx)*sum(ry)| orders permutations
    // exactly like |rho|: the deviation terms are permutation-invariant.
    const auto n = static_cast<int128>(st.n());
    const int128 product_term = static_cast<int128>(st.sum_x) * st.sum_y;
    const int128 observed = abs128(n * cross_term(st.rx, st.ry) - product_term);

    const auto exhaustive = factorial_if_small(st.n(), permutations);
    std::uint64_t hits = 0;
    if (exhaustive) {
        std::vector<std::size_t> idx(st.n());
        std::iota(idx.begin(), idx.end(), 0);
        do {
            int128 sxy = 0;
            for (std::size_t i = 0; i < st.n(); ++i) {
                sxy += static_cast<int128>(st.rx[i]) * st.ry[idx[i]];
            }
            if (abs128(n * sxy - product_term) >= observed) ++hits;
        } while (std::next_permutation(idx.begin(), idx.end()));
        result.p_value = static_cast<double>(hits) / static_cast<double>(*exhaustive);
        result.permutations_used = *exhaustive;
        return result;
    }

    Rng rng(seed);
    std::vector<std::int64_t> shuffled = st.ry;
    for (std::uint64_t p = 0; p < permutations; ++p) {
        rng.shuffle(shuffled);
        int128 sxy = 0;
        for (std::size_t i = 0; i < st.n(); ++i) {
            sxy += static_cast<int128>(st.rx[i]) * shuffled[i];
        }
        if (abs128(n * sxy - product_term) >= observed) ++hits;
    }
    result.p_value = static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
    result.permutations_used = permutations;
    return result;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // Lentz's continued fraction for the incomplete beta.
    auto beta_cf = [](double aa, double bb, double xx) {
        constexpr int kMaxIter = 300;
        constexpr double kEps = 3e-16;
        constexpr double kTiny = 1e-300;

        const double qab = aa + bb;
        const double qap = aa + 1.0;
        const double qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::abs(d) < kTiny) d = kTiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= kMaxIter; ++m) {
            const int m2 = 2 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < kTiny) d = kTiny;
            c = 1.0 + num / c;
            if (std::abs(c) < kTiny) c = kTiny;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < kTiny) d = kTiny;
            c = 1.0 + num / c;
            if (std::abs(c) < kTiny) c = kTiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < kEps) break;
        }
        return h;
    };

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw NumericError("degrees of freedom must be positive");
    if (t == 0.0) return 0.5;
    const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

OlsSolver::OlsSolver(const std::vector<DenseVector>& rows) {
    n_ = rows.size();
    if (n_ == 0) throw ConfigError("regression needs at least one row");
    dim_ = rows.front().size();
    if (dim_ == 0) throw ConfigError("regression rows must have at least one predictor");
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw ConfigError("regression rows have inconsistent lengths");
        }
    }
    if (n_ < dim_ + 1) {
        throw NumericError("underdetermined system: " + std::to_string(n_) + " rows for " +
                           std::to_string(dim_ + 1) + " coefficients");
    }

    x_.reserve(n_ * dim_);
    for (const auto& row : rows) x_.insert(x_.end(), row.begin(), row.end());

    // Intercept-augmented Gram matrix; the constant column sits last.
    const std::size_t d = dim_ + 1;
    std::vector<double> gram(d * d, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        const double* row = x_.data() + r * dim_;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) gram[i * d + j] += row[i] * row[j];
            gram[i * d + dim_] += row[i];
        }
    }
    gram[dim_ * d + dim_] = static_cast<double>(n_);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j) gram[i * d + j] = gram[j * d + i];
    }

    auto cholesky = [d](std::vector<double> a) -> std::optional<std::vector<double>> {
        double max_diag = 0.0;
        for (std::size_t i = 0; i < d; ++i) max_diag = std::max(max_diag, a[i * d + i]);
        const double floor = std::max(max_diag, 1.0) * 1e-13;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double sum = a[i * d + j];
                for (std::size_t k = 0; k < j; ++k) sum -= a[i * d + k] * a[j * d + k];
                if (i == j) {
                    if (!(sum > floor)) return std::nullopt;
                    a[i * d + i] = std::sqrt(sum);
                } else {
                    a[i * d + j] = sum / a[j * d + j];
                }
            }
        }
        return a;
    };

    auto factor = cholesky(gram);
    if (!factor) {
        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i) trace += gram[i * d + i];
        const double ridge = 1e-8 * trace / static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i) gram[i * d + i] += ridge;
        factor = cholesky(gram);
        if (!factor) throw NumericError("Gram matrix is singular even with ridge fallback");
    }
    chol_ = std::move(*factor);
}

OlsModel OlsSolver::fit(std::span<const double> y) const {
    if (y.size() != n_) {
        throw ConfigError("target length " + std::to_string(y.size()) + " does not match " +
                          std::to_string(n_) + " rows");
    }
    const std::size_t d = dim_ + 1;
    std::vector<double> rhs(d, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        const double* row = x_.data() + r * dim_;
        for (std::size_t i = 0; i < dim_; ++i) rhs[i] += row[i] * y[r];
        rhs[dim_] += y[r];
    }

    // L z = rhs, then L^T w = z.
    for (std::size_t i = 0; i < d; ++i) {
        double sum = rhs[i];
        for (std::size_t k = 0; k < i; ++k) sum -= chol_[i * d + k] * rhs[k];
        rhs[i] = sum / chol_[i * d + i];
    }
    for (std::size_t i = d; i-- > 0;) {
        double sum = rhs[i];
        for (std::size_t k = i + 1; k < d; ++k) sum -= chol_[k * d + i] * rhs[k];
        rhs[i] = sum / chol_[i * d + i];
    }

    OlsModel model;
    model.weights.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(dim_));
    model.intercept = rhs[dim_];
    for (double w : model.weights) {
        if (!std::isfinite(w)) throw NumericError("regression produced non-finite coefficients");
    }
    if (!std::isfinite(model.intercept)) {
        throw NumericError("regression produced non-finite coefficients");
    }
    return model;
}

OlsModel ols_fit(const std::vector<DenseVector>& x, std::span<const double> y) {
    OlsSolver solver(x);
    return solver.fit(y);
}

double predict(const OlsModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size()) {
        throw ConfigError("predictor length does not match model dimensionality");
    }
    double out = model.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) out += model.weights[i] * x[i];
    return out;
}

double mse(const OlsModel& model, const std::vector<DenseVector>& x, std::span<const double> y) {
    if (x.empty()) throw ConfigError("empty evaluation set");
    if (x.size() != y.size()) throw ConfigError("evaluation rows and targets differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = predict(model, x[i]) - y[i];
        sum += r * r;
    }
    return sum / static_cast<double>(x.size());
}

} // namespace gazecorr
