#pragma once

#include <span>
#include <utility>

namespace hamxcs {

double sample_mean(std::span<const double> xs);
// n-1 denominator.
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

struct WelchResult {
    double t = 0.0;
    double p = 1.0;  // two-sided
    double degrees_of_freedom = 0.0;
};

// Welch's unequal-variance t statistic with Welch-Satterthwaite degrees of
// freedom; two-sided p from the t-distribution survival function. Requires
// two or more values per sample and nonzero variance in at least one.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace hamxcs
