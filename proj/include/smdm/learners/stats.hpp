#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smdm/bytes.hpp"

namespace smdm {

// Welford running mean/variance; merge-free, add-only.
struct GaussianStats {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x, double weight = 1.0) {
        count += weight;
        double delta = x - mean;
        mean += delta * weight / count;
        m2 += delta * weight * (x - mean);
    }

    double variance() const {
        if (count <= 1.0) return 0.0;
        return m2 / (count - 1.0);
    }

    double stddev() const { return std::sqrt(variance()); }

    // Density with a floor keeping zero-variance attributes finite.
    double log_density(double x) const {
        constexpr double kMinVariance = 1e-9;
        double var = std::max(variance(), kMinVariance);
        double diff = x - mean;
        return -0.5 * (std::log(2.0 * M_PI * var) + diff * diff / var);
    }

    // P(X <= x) under the fitted normal.
    double cdf(double x) const {
        constexpr double kMinVariance = 1e-9;
        double var = std::max(variance(), kMinVariance);
        return 0.5 * std::erfc((mean - x) / std::sqrt(2.0 * var));
    }

    void save(ByteWriter& w) const {
        w.put_f64(count);
        w.put_f64(mean);
        w.put_f64(m2);
    }

    static GaussianStats load(ByteReader& r) {
        GaussianStats s;
        s.count = r.get_f64();
        s.mean = r.get_f64();
        s.m2 = r.get_f64();
        return s;
    }

    bool operator==(const GaussianStats&) const = default;
};

struct CategoricalCounts {
    std::vector<double> counts;

    explicit CategoricalCounts(std::size_t domain_size = 0) : counts(domain_size, 0.0) {}

    void add(std::uint16_t value, double weight = 1.0) { counts.at(value) += weight; }

    double total() const {
        double t = 0.0;
        for (double c : counts) t += c;
        return t;
    }

    void save(ByteWriter& w) const {
        w.put_u32(static_cast<std::uint32_t>(counts.size()));
        for (double c : counts) w.put_f64(c);
    }

    static CategoricalCounts load(ByteReader& r) {
        std::uint32_t n = r.get_u32();
        CategoricalCounts c(n);
        for (std::uint32_t i = 0; i < n; ++i) c.counts[i] = r.get_f64();
        return c;
    }

    bool operator==(const CategoricalCounts&) const = default;
};

// log(sum(exp(v))) without overflow.
inline double logsumexp(const std::vector<double>& v) {
    double hi = -INFINITY;
    for (double x : v) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - hi);
    return hi + std::log(sum);
}

} // namespace smdm
