#include "convo/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace convo {

PrecisionRecallF1 precision_recall_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
    PrecisionRecallF1 r;
    r.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1 = (r.precision + r.recall > 0.0)
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-12;
    constexpr double kFpMin = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log1p(-x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) return 1.0;
    if (!std::isfinite(t)) return 0.0;
    double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
    if (sample_a.size() < 2 || sample_b.size() < 2)
        throw std::invalid_argument("welch_t: each sample needs >= 2 observations");

    auto mean_var = [](const std::vector<double>& s) {
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= static_cast<double>(s.size());
        double var = 0.0;
        for (double v : s) var += (v - mean) * (v - mean);
        var /= static_cast<double>(s.size() - 1);
        return std::pair<double, double>(mean, var);
    };
    auto [ma, va] = mean_var(sample_a);
    auto [mb, vb] = mean_var(sample_b);
    double na = static_cast<double>(sample_a.size());
    double nb = static_cast<double>(sample_b.size());

    WelchResult r;
    double se2 = va / na + vb / nb;
    if (se2 == 0.0) {
        // identical constant samples: no variance, t undefined unless means agree
        if (ma == mb) {
            r.t = 0.0;
            r.df = na + nb - 2.0;
            r.p = 1.0;
            return r;
        }
        r.defined = false;
        r.t = (ma > mb) ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
        r.df = na + nb - 2.0;
        r.p = 0.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    double num = se2 * se2;
    double den = (va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0);
    r.df = num / den;
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

}  // namespace convo
