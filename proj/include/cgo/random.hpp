#ifndef CGO_RANDOM_HPP
#define CGO_RANDOM_HPP

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so parallel workers never share state.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "algebra.hpp"

namespace cgo {

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)))
    {
    }

    constexpr std::uint64_t at(std::uint64_t counter) const { return splitmix64(key_ ^ splitmix64(counter)); }
    constexpr std::uint64_t next() { return at(counter_++); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    cplx complex_normal() { return {normal(), normal()}; }

    GradedForm graded_form()
    {
        GradedForm g;
        for (int b = 0; b < kBlades; ++b) g[b] = complex_normal();
        return g;
    }

    /// Random form of pure grade l.
    GradedForm graded_form(int l) { return graded_form().grade(l); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Fractional part of i times the golden ratio: a low-discrepancy sequence on [0,1).
inline double golden_sequence(std::uint64_t i, double offset = 0.0)
{
    constexpr double phi_inv = 0.6180339887498948482;
    const double v = offset + static_cast<double>(i) * phi_inv;
    return v - std::floor(v);
}

}  // namespace cgo

#endif  // CGO_RANDOM_HPP
