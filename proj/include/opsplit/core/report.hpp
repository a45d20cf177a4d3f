#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opsplit/core/vector.hpp"

namespace opsplit {

// Upper: measured <= bound. Lower: measured >= bound.
enum class BoundSense { Upper, Lower };

struct BoundEntry {
    std::size_t k = 0;
    double bound = 0.0;
    double measured = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;

    bool pass() const { return margin >= -tolerance; }
};

class BoundReport {
public:
    BoundReport() = default;
    BoundReport(std::string name, BoundSense sense, double absolute = 1e-9, double relative = 1e-12)
        : name_(std::move(name)), sense_(sense), absolute_(absolute), relative_(relative) {}

    void add(std::size_t k, double bound, double measured) {
        const double scale = std::max(std::abs(bound), std::abs(measured));
        add(k, bound, measured, absolute_ + relative_ * (std::isfinite(scale) ? scale : 0.0));
    }

    void add(std::size_t k, double bound, double measured, double tolerance) {
        BoundEntry e{k, bound, measured, 0.0, tolerance};
        e.margin = sense_ == BoundSense::Upper ? bound - measured : measured - bound;
        if (std::isnan(e.margin)) e.margin = -std::numeric_limits<double>::infinity();
        if (!e.pass() && !first_violation_) first_violation_ = entries_.size();
        if (entries_.empty() || e.margin < entries_[worst_].margin) worst_ = entries_.size();
        entries_.push_back(e);
    }

    const std::string& name() const { return name_; }
    BoundSense sense() const { return sense_; }
    const std::vector<BoundEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    bool pass() const { return !first_violation_.has_value(); }

    double worst_margin() const {
        return entries_.empty() ? std::numeric_limits<double>::infinity() : entries_[worst_].margin;
    }

    std::optional<BoundEntry> worst() const {
        if (entries_.empty()) return std::nullopt;
        return entries_[worst_];
    }

    // Iteration index of the first failing entry.
    std::optional<std::size_t> first_violation() const {
        if (!first_violation_) return std::nullopt;
        return entries_[*first_violation_].k;
    }

private:
    std::string name_;
    BoundSense sense_ = BoundSense::Upper;
    double absolute_ = 1e-9;
    double relative_ = 1e-12;
    std::vector<BoundEntry> entries_;
    std::size_t worst_ = 0;
    std::optional<std::size_t> first_violation_;
};

} // namespace opsplit
