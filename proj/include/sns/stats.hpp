/// Monte-Carlo bookkeeping: running moments, standard errors, and the
/// self-auditing report format shared by all experiments.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sns {

/// Welford running mean/variance; mergeable across independent workers.
class RunningStat {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const RunningStat& o) {
        if (o.n_ == 0) return;
        const double d = o.mean_ - mean_;
        const long n = n_ + o.n_;
        m2_ += o.m2_ + d * d * static_cast<double>(n_) * o.n_ / n;
        mean_ = (mean_ * n_ + o.mean_ * o.n_) / n;
        n_ = n;
    }
    long count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double se() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

  private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct ReportRow {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double se = 0.0;    // 0 for deterministic gates
    /// pass iff |estimate - target| <= gate * se, or, when se == 0,
    /// estimate <= target + gate (one-sided bound).
    double gate = 3.0;
    bool pass = false;
};

/// Pass flag always derivable from (estimate, target, se, gate) in the row.
ReportRow make_row(std::string name, double estimate, double target, double se,
                   double gate = 3.0);

struct ExperimentReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
    std::string version;

    bool all_pass() const;
    /// CSV with a provenance header and one row per metric.
    void write_csv(const std::string& path) const;
};

uint64_t fnv1a(const std::string& text);

inline const char* kVersion = "torus-sns 0.1.0";

}  // namespace sns
