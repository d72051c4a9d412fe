#pragma once

#include <array>
#include <complex>

namespace shf {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix used for both ABCD two-ports and acoustic
/// transfer matrices.
struct Mat2 {
    std::array<cplx, 4> m{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};

    constexpr Mat2() = default;
    constexpr Mat2(cplx a, cplx b, cplx c, cplx d) : m{a, b, c, d} {}

    static constexpr Mat2 identity() { return {}; }

    cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    cplx a() const { return m[0]; }
    cplx b() const { return m[1]; }
    cplx c() const { return m[2]; }
    cplx d() const { return m[3]; }

    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
    cplx trace() const { return m[0] + m[3]; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]};
    }
    Mat2& operator*=(const Mat2& y) { return *this = *this * y; }
};

}  // namespace shf
