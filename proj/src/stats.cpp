#include "hamxcs/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace hamxcs {

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs at least two values");
    const double m = sample_mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("each sample needs at least two values");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sample_variance(a);
    const double vb = sample_variance(b);
    if (va == 0.0 && vb == 0.0) throw std::invalid_argument("both samples are degenerate (zero variance)");

    const double se2 = va / na + vb / nb;
    WelchResult result;
    result.t = (sample_mean(a) - sample_mean(b)) / std::sqrt(se2);
    result.degrees_of_freedom =
        se2 * se2 / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));

    boost::math::students_t dist(result.degrees_of_freedom);
    result.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(result.t)));
    return result;
}

}  // namespace hamxcs
