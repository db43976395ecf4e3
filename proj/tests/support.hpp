#pragma once

#include "mixotype/mixotype.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing_support {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917ULL);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline mixotype::Point random_point(double lo = -2.0, double hi = 2.0) { return {uniform(lo, hi), uniform(lo, hi)}; }

inline bool rel_close(double a, double b, double rel, double abs_floor = 1.0) {
    return std::fabs(a - b) <= rel * std::max(abs_floor, std::max(std::fabs(a), std::fabs(b)));
}

/// Samples where every entry of the system evaluates.
inline std::vector<mixotype::Point> evaluable_points(const mixotype::SystemDef& sys, int count, double lo = -2.0,
                                                     double hi = 2.0) {
    std::vector<mixotype::Point> out;
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 100 * count; ++tries) {
        const mixotype::Point p = random_point(lo, hi);
        try {
            sys.entries(p);
            sys.gradients(p);
            out.push_back(p);
        } catch (const mixotype::DomainError&) {
        }
    }
    return out;
}

}  // namespace testing_support
