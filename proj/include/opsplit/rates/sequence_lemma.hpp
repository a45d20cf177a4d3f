#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "opsplit/core/report.hpp"

namespace opsplit {

enum class LemmaPart { Monotone = 1, MonotoneUpToErrors = 2, FasterRates = 3, RunningMin = 4 };

// Scalar sequences for the summable-sequence rate lemma. `b` (length a.size()+1)
// is only used by the faster-rates clause; `e` by clauses 2 and 3.
struct SequenceCheck {
    std::vector<double> a;
    std::vector<double> lambda;
    std::vector<double> e;
    std::vector<double> b;
    LemmaPart part = LemmaPart::Monotone;
};

namespace detail {

inline void require_nonnegative(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        require(std::isfinite(x) && x >= 0.0, ErrorKind::InvalidArgument,
                std::string(what) + " must be finite and nonnegative");
    }
}

inline std::vector<double> running_min(const std::vector<double>& a) {
    std::vector<double> out(a.size());
    double m = a.empty() ? 0.0 : a[0];
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = m = std::min(m, a[k]);
    return out;
}

} // namespace detail

inline std::vector<double> running_min(const std::vector<double>& a) { return detail::running_min(a); }

// Asserts the conclusions of the requested clause over the finite horizon of the
// supplied sequences. Every infinite sum is replaced by a partial sum that is
// still an upper estimate of what the finite-horizon proof needs.
inline BoundReport verify_summable_lemma(const SequenceCheck& check) {
    const auto& a = check.a;
    const auto& lambda = check.lambda;
    require(!a.empty() && a.size() == lambda.size(), ErrorKind::InvalidArgument,
            "sequence and weights must be nonempty with equal lengths");
    detail::require_nonnegative(a, "sequence a");
    detail::require_nonnegative(lambda, "weights lambda");
    const std::size_t n = a.size();

    std::vector<double> cum(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) cum[k] = acc += lambda[k];

    auto weighted_total = [&](const std::vector<double>& seq) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += lambda[i] * seq[i];
        return s;
    };

    switch (check.part) {
    case LemmaPart::Monotone: {
        for (std::size_t k = 1; k < n; ++k) {
            require(a[k] <= a[k - 1], ErrorKind::InvalidArgument, "monotone clause needs a nonincreasing sequence");
        }
        BoundReport report("lemma-monotone", BoundSense::Upper, 0.0, 1e-12);
        const double total = weighted_total(a);
        for (std::size_t k = 0; k < n; ++k) {
            if (cum[k] > 0.0) report.add(k, total / cum[k], a[k]);
        }
        // (Lambda_k - Lambda_{ceil(k/2)}) a_k <= sum_{i=ceil(k/2)}^{k} lambda_i a_i
        std::vector<double> tail(n + 1, 0.0);
        for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + lambda[i] * a[i];
        for (std::size_t k = 2; k < n; ++k) {
            const std::size_t half = (k + 1) / 2;
            report.add(k, tail[half] - tail[k + 1], (cum[k] - cum[half]) * a[k]);
        }
        return report;
    }
    case LemmaPart::MonotoneUpToErrors: {
        const auto& e = check.e;
        require(e.size() + 1 >= n, ErrorKind::InvalidArgument, "error sequence too short");
        for (std::size_t k = 0; k + 1 < n; ++k) {
            require(a[k + 1] <= a[k] + e[k] + 1e-15 * std::max(1.0, a[k]), ErrorKind::InvalidArgument,
                    "sequence violates a_{k+1} <= a_k + e_k at k=" + std::to_string(k));
        }
        BoundReport report("lemma-monotone-up-to-errors", BoundSense::Upper, 0.0, 1e-12);
        const double total = weighted_total(a);
        // sum_{i<k} Lambda_i e_i plus the positive part of the remaining horizon terms.
        std::vector<double> positive_tail(n + 1, 0.0);
        for (std::size_t i = std::min(e.size(), n); i-- > 0;)
            positive_tail[i] = positive_tail[i + 1] + cum[i] * std::max(0.0, e[i]);
        double head = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (cum[k] > 0.0) report.add(k, (total + head + positive_tail[k]) / cum[k], a[k]);
            if (k < e.size()) head += cum[k] * e[k];
        }
        return report;
    }
    case LemmaPart::FasterRates: {
        const auto& b = check.b;
        const auto& e = check.e;
        require(b.size() == n + 1 && e.size() >= n, ErrorKind::InvalidArgument,
                "faster-rates clause needs b of length n+1 and e of length n");
        detail::require_nonnegative(b, "sequence b");
        detail::require_nonnegative(e, "sequence e");
        for (std::size_t k = 0; k < n; ++k) {
            require(lambda[k] * a[k] <= b[k] - b[k + 1] + e[k] + 1e-15 * std::max(1.0, b[k]),
                    ErrorKind::InvalidArgument, "sequence violates lambda_k a_k <= b_k - b_{k+1} + e_k");
        }
        double rhs = 0.0;
        for (std::size_t i = 0; i <= n; ++i) rhs += b[i];
        for (std::size_t i = 0; i < n; ++i) rhs += double(i + 1) * e[i];
        BoundReport report("lemma-faster-rates", BoundSense::Upper, 0.0, 1e-12);
        double lhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            lhs += double(k + 1) * lambda[k] * a[k];
            report.add(k, rhs, lhs);
        }
        return report;
    }
    case LemmaPart::RunningMin: {
        const std::vector<double> best = detail::running_min(a);
        BoundReport report("lemma-running-min", BoundSense::Upper, 0.0, 1e-12);
        for (std::size_t k = 1; k < n; ++k) report.add(k, best[k - 1], best[k], 0.0);
        const double total = weighted_total(a);
        for (std::size_t k = 0; k < n; ++k) {
            if (cum[k] > 0.0) report.add(k, total / cum[k], best[k]);
        }
        return report;
    }
    }
    fail(ErrorKind::InvalidArgument, "unknown lemma clause");
}

} // namespace opsplit
