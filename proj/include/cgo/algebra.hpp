#ifndef CGO_ALGEBRA_HPP
#define CGO_ALGEBRA_HPP

// Pointwise graded exterior algebra of Λ ℝ³ with the Euclidean bilinear
// (non-Hermitian) inner product.
//
// Blades are stored densely in grade order:
//   0: 1   1: dx1   2: dx2   3: dx3   4: dx1^dx2   5: dx1^dx3   6: dx2^dx3   7: dx1^dx2^dx3
// Every blade carries its index set in increasing order, so dx3^dx1 is
// represented as -(dx1^dx3).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace cgo {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr int kBlades = 8;

namespace algebra {

/// Bitmask of the index set of each stored blade (bit j-1 <-> dx^j).
inline constexpr std::array<std::uint8_t, kBlades> kBladeMask = {0, 1, 2, 4, 3, 5, 6, 7};

constexpr int blade_of_mask(unsigned mask)
{
    for (int b = 0; b < kBlades; ++b)
        if (kBladeMask[b] == mask) return b;
    return -1;
}

constexpr int grade_of_blade(int blade) { return std::popcount(static_cast<unsigned>(kBladeMask[blade])); }

inline constexpr std::array<int, 4> kGradeBegin = {0, 1, 4, 7};
inline constexpr std::array<int, 4> kGradeEnd = {1, 4, 7, 8};

inline const char* blade_name(int blade)
{
    static constexpr const char* names[kBlades] = {"1", "dx1", "dx2", "dx3", "dx1^dx2", "dx1^dx3", "dx2^dx3",
                                                   "dx1^dx2^dx3"};
    return names[blade];
}

/// An ordered subset of {1,2,3}.
class Blade {
public:
    constexpr Blade() = default;
    constexpr explicit Blade(int index) : index_(index)
    {
        if (index < 0 || index >= kBlades) throw std::out_of_range("blade index out of range");
    }
    static constexpr Blade from_mask(unsigned mask) { return Blade(blade_of_mask(mask & 7u)); }

    constexpr int index() const { return index_; }
    constexpr unsigned mask() const { return kBladeMask[index_]; }
    constexpr int grade() const { return grade_of_blade(index_); }

    friend constexpr bool operator==(Blade, Blade) = default;

private:
    int index_ = 0;
};

/// Sign of e_A ^ e_B for disjoint index sets: parity of inversions (a in A, b in B, a > b).
constexpr int permutation_sign(unsigned a, unsigned b)
{
    if (a & b) return 0;
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        if (a & (1u << i))
            for (int j = 0; j < i; ++j)
                if (b & (1u << j)) ++inversions;
    return (inversions % 2) ? -1 : 1;
}

/// Precomputed sign tables. Kept as a value type so that check suites can run
/// against deliberately corrupted copies.
struct BladeTables {
    // wedge: e_a ^ e_b = wedge_sign[a][b] * e_{wedge_out[a][b]}
    std::array<std::array<int, kBlades>, kBlades> wedge_sign{};
    std::array<std::array<int, kBlades>, kBlades> wedge_out{};
    // hodge: *e_a = hodge_sign[a] * e_{7 - a}
    std::array<int, kBlades> hodge_sign{};
    std::array<int, kBlades> hodge_out{};
    // vee: e_v v e_u = vee_sign[v][u] * e_{vee_out[v][u]}
    std::array<std::array<int, kBlades>, kBlades> vee_sign{};
    std::array<std::array<int, kBlades>, kBlades> vee_out{};
};

constexpr BladeTables make_tables()
{
    BladeTables t{};
    for (int a = 0; a < kBlades; ++a) {
        const unsigned ma = kBladeMask[a];
        const unsigned comp = 7u & ~ma;
        t.hodge_out[a] = blade_of_mask(comp);
        t.hodge_sign[a] = permutation_sign(ma, comp);
        for (int b = 0; b < kBlades; ++b) {
            const unsigned mb = kBladeMask[b];
            t.wedge_sign[a][b] = permutation_sign(ma, mb);
            t.wedge_out[a][b] = blade_of_mask((ma | mb) & 7u);
        }
    }
    // (v vee u) = (-1)^{(n+m-l)(l-m)} * (v ^ *u), n = 3, m = |v|, l = |u|.
    for (int v = 0; v < kBlades; ++v) {
        for (int u = 0; u < kBlades; ++u) {
            const int m = grade_of_blade(v);
            const int l = grade_of_blade(u);
            const int star_u = t.hodge_out[u];
            const int s1 = t.hodge_sign[u];
            const int s2 = t.wedge_sign[v][star_u];
            const int wv = t.wedge_out[v][star_u];
            const int s3 = t.hodge_sign[wv];
            int sign = s1 * s2 * s3;
            if (m > l) sign = 0;
            const int e = (3 + m - l) * (l - m);
            if (e % 2) sign = -sign;
            t.vee_sign[v][u] = sign;
            t.vee_out[v][u] = t.hodge_out[wv];
        }
    }
    return t;
}

inline constexpr BladeTables kTables = make_tables();

/// One point value of a graded form on ℝ³.
class GradedForm {
public:
    constexpr GradedForm() = default;
    constexpr explicit GradedForm(const std::array<cplx, kBlades>& c) : c_(c) {}

    static constexpr GradedForm blade(int index, cplx value = 1.0)
    {
        GradedForm g;
        g.c_[static_cast<std::size_t>(index)] = value;
        return g;
    }
    static constexpr GradedForm scalar(cplx value) { return blade(0, value); }
    static constexpr GradedForm one_form(cplx x1, cplx x2, cplx x3)
    {
        GradedForm g;
        g.c_[1] = x1;
        g.c_[2] = x2;
        g.c_[3] = x3;
        return g;
    }

    constexpr cplx& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    constexpr const cplx& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    constexpr const std::array<cplx, kBlades>& coeffs() const { return c_; }

    /// Grade-l part; all other blades zeroed.
    constexpr GradedForm grade(int l) const
    {
        GradedForm g;
        for (int b = kGradeBegin[l]; b < kGradeEnd[l]; ++b) g.c_[b] = c_[b];
        return g;
    }

    /// Sum of the grades whose bit is set in `grade_mask` (bit l <-> grade l).
    constexpr GradedForm grades(unsigned grade_mask) const
    {
        GradedForm g;
        for (int b = 0; b < kBlades; ++b)
            if (grade_mask & (1u << grade_of_blade(b))) g.c_[b] = c_[b];
        return g;
    }

    /// Grade involution: multiplies grade l by (-1)^l.
    constexpr GradedForm involution() const
    {
        GradedForm g = *this;
        for (int b = 0; b < kBlades; ++b)
            if (grade_of_blade(b) % 2) g.c_[b] = -g.c_[b];
        return g;
    }

    bool is_pure_grade(int l) const
    {
        for (int b = 0; b < kBlades; ++b)
            if (grade_of_blade(b) != l && c_[b] != cplx{}) return false;
        return true;
    }

    bool is_finite() const
    {
        for (const auto& z : c_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    /// Hermitian magnitude |u| = <u, conj u>^{1/2}.
    double norm() const
    {
        double s = 0.0;
        for (const auto& z : c_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& z : c_) m = std::max(m, std::abs(z));
        return m;
    }

    GradedForm conj() const
    {
        GradedForm g;
        for (int b = 0; b < kBlades; ++b) g.c_[b] = std::conj(c_[b]);
        return g;
    }

    constexpr GradedForm& operator+=(const GradedForm& o)
    {
        for (int b = 0; b < kBlades; ++b) c_[b] += o.c_[b];
        return *this;
    }
    constexpr GradedForm& operator-=(const GradedForm& o)
    {
        for (int b = 0; b < kBlades; ++b) c_[b] -= o.c_[b];
        return *this;
    }
    constexpr GradedForm& operator*=(cplx s)
    {
        for (auto& z : c_) z *= s;
        return *this;
    }
    friend constexpr GradedForm operator+(GradedForm a, const GradedForm& b) { return a += b; }
    friend constexpr GradedForm operator-(GradedForm a, const GradedForm& b) { return a -= b; }
    friend constexpr GradedForm operator-(GradedForm a) { return a *= -1.0; }
    friend constexpr GradedForm operator*(GradedForm a, cplx s) { return a *= s; }
    friend constexpr GradedForm operator*(cplx s, GradedForm a) { return a *= s; }
    friend constexpr bool operator==(const GradedForm&, const GradedForm&) = default;

private:
    std::array<cplx, kBlades> c_{};
};

inline GradedForm wedge(const GradedForm& u, const GradedForm& v, const BladeTables& t = kTables)
{
    GradedForm out;
    for (int a = 0; a < kBlades; ++a) {
        if (u[a] == cplx{}) continue;
        for (int b = 0; b < kBlades; ++b) {
            const int s = t.wedge_sign[a][b];
            if (s != 0) out[t.wedge_out[a][b]] += static_cast<double>(s) * u[a] * v[b];
        }
    }
    return out;
}

inline GradedForm hodge(const GradedForm& u, const BladeTables& t = kTables)
{
    GradedForm out;
    for (int a = 0; a < kBlades; ++a) out[t.hodge_out[a]] += static_cast<double>(t.hodge_sign[a]) * u[a];
    return out;
}

/// Bilinear inner product summed over grades; no conjugation.
inline cplx inner(const GradedForm& u, const GradedForm& v)
{
    cplx s{};
    for (int b = 0; b < kBlades; ++b) s += u[b] * v[b];
    return s;
}

/// v ∨ u, the contraction adjoint to wedge: <w ^ v, u> = <w, v ∨ u>.
inline GradedForm vee(const GradedForm& v, const GradedForm& u, const BladeTables& t = kTables)
{
    GradedForm out;
    for (int a = 0; a < kBlades; ++a) {
        if (v[a] == cplx{}) continue;
        for (int b = 0; b < kBlades; ++b) {
            const int s = t.vee_sign[a][b];
            if (s != 0) out[t.vee_out[a][b]] += static_cast<double>(s) * v[a] * u[b];
        }
    }
    return out;
}

/// Symmetric 2-tensor; entries (j,k) with j <= k stored once.
class SymTensor2 {
public:
    static constexpr int kEntries = 6;

    /// Storage slot of (j,k), 1-based indices, either order.
    static constexpr int slot(int j, int k)
    {
        if (j > k) std::swap(j, k);
        constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return table[j - 1][k - 1];
    }

    constexpr cplx& operator()(int j, int k) { return c_[static_cast<std::size_t>(slot(j, k))]; }
    constexpr const cplx& operator()(int j, int k) const { return c_[static_cast<std::size_t>(slot(j, k))]; }
    constexpr cplx& operator[](int s) { return c_[static_cast<std::size_t>(s)]; }
    constexpr const cplx& operator[](int s) const { return c_[static_cast<std::size_t>(s)]; }

    friend constexpr bool operator==(const SymTensor2&, const SymTensor2&) = default;

private:
    std::array<cplx, kEntries> c_{};
};

/// u ⊙ v = ½(u ⊗ v + v ⊗ u) for pure 1-forms.
inline SymTensor2 sym_product(const GradedForm& u, const GradedForm& v)
{
    if (!u.is_pure_grade(1) || !v.is_pure_grade(1))
        throw std::invalid_argument("sym_product requires pure grade-1 inputs");
    SymTensor2 t;
    for (int j = 1; j <= 3; ++j)
        for (int k = j; k <= 3; ++k) t(j, k) = 0.5 * (u[j] * v[k] + u[k] * v[j]);
    return t;
}

/// Complex constant covector ζ = ζ_1 dx1 + ζ_2 dx2 + ζ_3 dx3.
struct ComplexCovector {
    std::array<cplx, 3> c{};

    constexpr cplx& operator[](int j) { return c[static_cast<std::size_t>(j)]; }
    constexpr const cplx& operator[](int j) const { return c[static_cast<std::size_t>(j)]; }

    GradedForm as_form() const { return GradedForm::one_form(c[0], c[1], c[2]); }
    /// Bilinear <ζ, ζ>.
    cplx dot(const ComplexCovector& o) const { return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2]; }
    cplx dot_real(const std::array<double, 3>& x) const { return c[0] * x[0] + c[1] * x[1] + c[2] * x[2]; }
    /// Hermitian length |ζ|.
    double norm() const { return std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2])); }
    bool is_zero() const { return c[0] == cplx{} && c[1] == cplx{} && c[2] == cplx{}; }

    friend ComplexCovector operator+(ComplexCovector a, const ComplexCovector& b)
    {
        for (int j = 0; j < 3; ++j) a.c[j] += b.c[j];
        return a;
    }
};

}  // namespace algebra

using algebra::ComplexCovector;
using algebra::GradedForm;
using algebra::hodge;
using algebra::inner;
using algebra::vee;
using algebra::wedge;

}  // namespace cgo

#endif  // CGO_ALGEBRA_HPP
