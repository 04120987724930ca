#pragma once

#include <numbers>

#include "cgo/media.hpp"

namespace fixtures {

inline const cgo::Grid& grid32()
{
    static const cgo::Grid g(32, 2.0 * std::numbers::pi);
    return g;
}

/// Smooth two-bump medium with a conductive component.
inline cgo::MediumSpec two_bump(double scale = 1.0)
{
    cgo::MediumSpec s;
    s.omega = 1.0;
    s.eps0 = 1.0;
    s.mu0 = 1.0;
    s.eps.push_back({{0.3, -0.2, 0.1}, 1.1, 0.3 * scale, 6.0});
    s.mu.push_back({{-0.25, 0.2, -0.1}, 1.0, 0.2 * scale, 6.0});
    s.sigma.push_back({{0.1, 0.1, -0.2}, 0.9, 0.1 * scale, 6.0});
    return s;
}

/// A second medium that agrees with two_bump() outside the central sub-box.
inline cgo::MediumSpec other_bump()
{
    cgo::MediumSpec s = two_bump();
    s.eps[0] = {{-0.2, 0.25, 0.0}, 1.0, 0.25, 6.0};
    s.mu[0] = {{0.2, -0.1, 0.15}, 1.1, 0.3, 6.0};
    s.sigma[0] = {{-0.1, 0.0, 0.1}, 0.8, 0.15, 6.0};
    return s;
}

inline cgo::DerivedMedium derived(const cgo::MediumSpec& s, const cgo::Grid& g = grid32())
{
    return cgo::derive(cgo::Medium::from_spec(g, s));
}

inline cgo::DerivedMedium background(const cgo::Grid& g = grid32())
{
    return cgo::derive(cgo::Medium::background(g, 1.0, 1.0, 1.0));
}

}  // namespace fixtures
