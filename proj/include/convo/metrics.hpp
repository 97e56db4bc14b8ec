#ifndef CONVO_METRICS_HPP
#define CONVO_METRICS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace convo {

struct PrecisionRecallF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// p = tp/(tp+fp), r = tp/(tp+fn), f1 = harmonic mean; 0 on empty denominators.
PrecisionRecallF1 precision_recall_f1(std::size_t tp, std::size_t fp, std::size_t fn);

// Square contingency table over an arbitrary label set.
template <typename Label>
class ConfusionCounts {
public:
    void add(const Label& a, const Label& b, std::size_t count = 1) {
        counts_[{a, b}] += count;
        total_ += count;
    }
    std::size_t total() const { return total_; }
    const std::map<std::pair<Label, Label>, std::size_t>& cells() const { return counts_; }

    double observed_agreement() const {
        if (total_ == 0) return 0.0;
        std::size_t diag = 0;
        for (const auto& [key, n] : counts_)
            if (key.first == key.second) diag += n;
        return static_cast<double>(diag) / static_cast<double>(total_);
    }

    double expected_agreement() const {
        if (total_ == 0) return 0.0;
        std::map<Label, std::size_t> row, col;
        for (const auto& [key, n] : counts_) {
            row[key.first] += n;
            col[key.second] += n;
        }
        double pe = 0.0;
        const double t = static_cast<double>(total_);
        for (const auto& [label, rn] : row) {
            auto it = col.find(label);
            if (it != col.end())
                pe += (static_cast<double>(rn) / t) * (static_cast<double>(it->second) / t);
        }
        return pe;
    }

private:
    std::map<std::pair<Label, Label>, std::size_t> counts_;
    std::size_t total_ = 0;
};

// Cohen's kappa; nullopt when expected agreement is 1 (undefined) or the
// table is empty.
template <typename Label>
std::optional<double> cohen_kappa(const ConfusionCounts<Label>& counts) {
    if (counts.total() == 0) return std::nullopt;
    double po = counts.observed_agreement();
    double pe = counts.expected_agreement();
    if (pe >= 1.0) return std::nullopt;
    return (po - pe) / (1.0 - pe);
}

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool defined = true;  // false when both variances are zero
};

// Welch's unequal-variance t-test with Satterthwaite degrees of freedom and a
// two-sided p-value. Requires each sample to have >= 2 observations.
WelchResult welch_t(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace convo

#endif
