#ifndef CGO_GRID_HPP
#define CGO_GRID_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace cgo {

/// Periodic cube [0, L)^3 sampled at n points per axis.
/// Point (i, j, k) sits at x = (i, j, k) * L / n and has flat index (i*n + j)*n + k.
class Grid {
public:
    Grid() = default;
    Grid(int n, double L) : n_(n), L_(L)
    {
        if (n < 8 || (n & (n - 1)) != 0) throw std::invalid_argument("grid n must be a power of two >= 8");
        if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid L must be positive");
    }

    int n() const { return n_; }
    double L() const { return L_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double h() const { return L_ / n_; }
    double cell_volume() const { return h() * h() * h(); }
    /// Lattice spacing 2π/L of the frequency grid.
    double dxi() const { return 2.0 * std::numbers::pi / L_; }

    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)) * n_ + static_cast<std::size_t>(k);
    }
    std::array<int, 3> coords(std::size_t idx) const
    {
        const int k = static_cast<int>(idx % n_);
        const int j = static_cast<int>((idx / n_) % n_);
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }
    std::array<double, 3> point(std::size_t idx) const
    {
        const auto c = coords(idx);
        return {c[0] * h(), c[1] * h(), c[2] * h()};
    }

    /// Signed integer wave number of FFT bin i: {0..n/2-1, -n/2..-1}.
    int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
    int bin_of(int m) const { return ((m % n_) + n_) % n_; }

    std::array<int, 3> wavevector(std::size_t idx) const
    {
        const auto c = coords(idx);
        return {wavenumber(c[0]), wavenumber(c[1]), wavenumber(c[2])};
    }
    std::array<double, 3> xi(std::size_t idx) const
    {
        const auto m = wavevector(idx);
        return {m[0] * dxi(), m[1] * dxi(), m[2] * dxi()};
    }
    /// Bin holding the frequency -m.
    std::size_t negated(std::size_t idx) const
    {
        const auto c = coords(idx);
        return index(bin_of(-c[0]), bin_of(-c[1]), bin_of(-c[2]));
    }
    std::size_t bin_of_wavevector(const std::array<int, 3>& m) const
    {
        return index(bin_of(m[0]), bin_of(m[1]), bin_of(m[2]));
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int n_ = 8;
    double L_ = 2.0 * std::numbers::pi;
};

struct PhysicalTag {};
struct SpectralTag {};

/// Component-major storage of C complex components over a grid.
template <int C, class Tag>
class BasicField {
public:
    static constexpr int kComponents = C;

    BasicField() = default;
    explicit BasicField(const Grid& g) : grid_(g), data_(static_cast<std::size_t>(C) * g.size()) {}

    const Grid& grid() const { return grid_; }
    std::size_t points() const { return grid_.size(); }

    std::span<cplx> comp(int c) { return {data_.data() + static_cast<std::size_t>(c) * points(), points()}; }
    std::span<const cplx> comp(int c) const
    {
        return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
    }
    cplx& operator()(int c, std::size_t idx) { return data_[static_cast<std::size_t>(c) * points() + idx]; }
    const cplx& operator()(int c, std::size_t idx) const { return data_[static_cast<std::size_t>(c) * points() + idx]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    GradedForm at(std::size_t idx) const
        requires(C == kBlades)
    {
        GradedForm g;
        for (int b = 0; b < kBlades; ++b) g[b] = (*this)(b, idx);
        return g;
    }
    void set(std::size_t idx, const GradedForm& g)
        requires(C == kBlades)
    {
        for (int b = 0; b < kBlades; ++b) (*this)(b, idx) = g[b];
    }

    /// Field with a constant graded form at every point.
    static BasicField constant(const Grid& g, const GradedForm& value)
        requires(C == kBlades)
    {
        BasicField f(g);
        for (int b = 0; b < kBlades; ++b) std::fill(f.comp(b).begin(), f.comp(b).end(), value[b]);
        return f;
    }

    /// Projection onto the grades flagged in `grade_mask`.
    BasicField grades(unsigned grade_mask) const
        requires(C == kBlades)
    {
        BasicField out(grid_);
        for (int b = 0; b < kBlades; ++b)
            if (grade_mask & (1u << algebra::grade_of_blade(b)))
                std::copy(comp(b).begin(), comp(b).end(), out.comp(b).begin());
        return out;
    }
    BasicField grade(int l) const
        requires(C == kBlades)
    {
        return grades(1u << l);
    }

    bool is_finite() const
    {
        for (const auto& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < points(); ++i) {
            double s = 0.0;
            for (int c = 0; c < C; ++c) s += std::norm((*this)(c, i));
            m = std::max(m, s);
        }
        return std::sqrt(m);
    }

    BasicField& operator+=(const BasicField& o)
    {
        check_grid(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    BasicField& operator-=(const BasicField& o)
    {
        check_grid(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    BasicField& operator*=(cplx s)
    {
        for (auto& z : data_) z *= s;
        return *this;
    }
    friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
    friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
    friend BasicField operator*(BasicField a, cplx s) { return a *= s; }
    friend BasicField operator*(cplx s, BasicField a) { return a *= s; }
    friend BasicField operator-(BasicField a) { return a *= -1.0; }

private:
    void check_grid(const BasicField& o) const
    {
        if (!(grid_ == o.grid_)) throw std::invalid_argument("field grids differ");
    }

    Grid grid_;
    std::vector<cplx> data_;
};

using FormField = BasicField<kBlades, PhysicalTag>;
using SpectralField = BasicField<kBlades, SpectralTag>;
using ScalarField = BasicField<1, PhysicalTag>;
using ScalarSpectrum = BasicField<1, SpectralTag>;
using SymTensorField = BasicField<algebra::SymTensor2::kEntries, PhysicalTag>;

/// Samples a scalar function of position.
template <class F>
ScalarField sample_scalar(const Grid& g, F&& f)
{
    ScalarField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out(0, i) = f(g.point(i));
    return out;
}

/// Scalar field embedded as the grade-0 part of a form field.
inline FormField as_form(const ScalarField& s, int blade = 0)
{
    FormField f(s.grid());
    std::copy(s.comp(0).begin(), s.comp(0).end(), f.comp(blade).begin());
    return f;
}

inline ScalarField component(const FormField& f, int blade)
{
    ScalarField s(f.grid());
    std::copy(f.comp(blade).begin(), f.comp(blade).end(), s.comp(0).begin());
    return s;
}

/// Pointwise product of a scalar field with a form field.
inline FormField multiply(const ScalarField& s, const FormField& f)
{
    FormField out(f.grid());
    for (int b = 0; b < kBlades; ++b)
        for (std::size_t i = 0; i < f.points(); ++i) out(b, i) = s(0, i) * f(b, i);
    return out;
}

/// Pointwise exterior-algebra operations on fields.
template <class Op>
FormField pointwise(const FormField& a, const FormField& b, Op&& op)
{
    FormField out(a.grid());
    for (std::size_t i = 0; i < a.points(); ++i) out.set(i, op(a.at(i), b.at(i)));
    return out;
}

inline FormField wedge(const FormField& a, const FormField& b)
{
    return pointwise(a, b, [](const GradedForm& x, const GradedForm& y) { return wedge(x, y); });
}
inline FormField vee(const FormField& a, const FormField& b)
{
    return pointwise(a, b, [](const GradedForm& x, const GradedForm& y) { return vee(x, y); });
}
inline FormField hodge(const FormField& a)
{
    FormField out(a.grid());
    for (std::size_t i = 0; i < a.points(); ++i) out.set(i, hodge(a.at(i)));
    return out;
}
inline FormField involution(const FormField& a)
{
    FormField out = a;
    for (int b = 0; b < kBlades; ++b)
        if (algebra::grade_of_blade(b) % 2)
            for (auto& z : out.comp(b)) z = -z;
    return out;
}

/// Discrete ∫⟨u, v⟩ dx with quadrature weight h³ (bilinear).
inline cplx integrate_inner(const FormField& u, const FormField& v)
{
    cplx s{};
    for (int b = 0; b < kBlades; ++b) {
        const auto cu = u.comp(b);
        const auto cv = v.comp(b);
        for (std::size_t i = 0; i < cu.size(); ++i) s += cu[i] * cv[i];
    }
    return s * u.grid().cell_volume();
}

inline cplx integrate(const ScalarField& f)
{
    cplx s{};
    for (const auto& z : f.comp(0)) s += z;
    return s * f.grid().cell_volume();
}

/// Discrete L² norm (Hermitian) with quadrature weight h³.
template <int C>
double l2_norm(const BasicField<C, PhysicalTag>& f)
{
    double s = 0.0;
    for (const auto& z : f.data()) s += std::norm(z);
    return std::sqrt(s * f.grid().cell_volume());
}

}  // namespace cgo

#endif  // CGO_GRID_HPP
