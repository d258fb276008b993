#ifndef JOS_MAT2_HPP
#define JOS_MAT2_HPP

#include <array>
#include <cmath>
#include <complex>

namespace jos {

using cplx = std::complex<double>;

// Small fixed-size complex 2-vector / 2x2 matrix used throughout the linear
// system machinery.  Entries are row-major: a=m11, b=m12, c=m21, d=m22.
struct vec2 {
    cplx x{0.0}, y{0.0};
};

struct mat2 {
    cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

    static mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static mat2 diag(cplx p, cplx q) { return {p, 0.0, 0.0, q}; }
    static mat2 zero() { return {}; }
};

inline mat2 operator+(const mat2& u, const mat2& v) { return {u.a + v.a, u.b + v.b, u.c + v.c, u.d + v.d}; }
inline mat2 operator-(const mat2& u, const mat2& v) { return {u.a - v.a, u.b - v.b, u.c - v.c, u.d - v.d}; }
inline mat2 operator*(cplx s, const mat2& u) { return {s * u.a, s * u.b, s * u.c, s * u.d}; }
inline mat2 operator*(const mat2& u, cplx s) { return s * u; }

inline mat2 operator*(const mat2& u, const mat2& v) {
    return {u.a * v.a + u.b * v.c, u.a * v.b + u.b * v.d,
            u.c * v.a + u.d * v.c, u.c * v.b + u.d * v.d};
}

inline vec2 operator*(const mat2& u, const vec2& w) {
    return {u.a * w.x + u.b * w.y, u.c * w.x + u.d * w.y};
}

inline mat2 commutator(const mat2& u, const mat2& v) { return u * v - v * u; }

inline cplx trace(const mat2& u) { return u.a + u.d; }
inline cplx det(const mat2& u) { return u.a * u.d - u.b * u.c; }

inline mat2 adjugate(const mat2& u) { return {u.d, -u.b, -u.c, u.a}; }

inline mat2 inverse(const mat2& u) {
    const cplx dt = det(u);
    return (cplx(1.0) / dt) * adjugate(u);
}

inline double frobenius_norm(const mat2& u) {
    return std::sqrt(std::norm(u.a) + std::norm(u.b) + std::norm(u.c) + std::norm(u.d));
}

// Eigenvalues of a 2x2 complex matrix.
inline std::array<cplx, 2> eigenvalues(const mat2& u) {
    const cplx t = trace(u);
    const cplx disc = std::sqrt(t * t - 4.0 * det(u));
    return {0.5 * (t + disc), 0.5 * (t - disc)};
}

// An eigenvector for a known eigenvalue (not normalized).
inline vec2 eigenvector(const mat2& u, cplx lambda) {
    // (u - lambda) v = 0; pick the larger row for stability.
    const cplx r1x = u.a - lambda, r1y = u.b;
    const cplx r2x = u.c, r2y = u.d - lambda;
    if (std::norm(r1x) + std::norm(r1y) >= std::norm(r2x) + std::norm(r2y)) {
        if (std::norm(r1x) >= std::norm(r1y)) return {-r1y / r1x, 1.0};
        return {1.0, -r1x / r1y};
    }
    if (std::norm(r2x) >= std::norm(r2y)) return {-r2y / r2x, 1.0};
    return {1.0, -r2x / r2y};
}

// Real 2x2 matrix with the same layout, used by the isomonodromic flows.
struct rmat2 {
    double a{0.0}, b{0.0}, c{0.0}, d{0.0};

    static rmat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static rmat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }

    mat2 complex() const { return {a, b, c, d}; }
};

inline rmat2 operator+(const rmat2& u, const rmat2& v) { return {u.a + v.a, u.b + v.b, u.c + v.c, u.d + v.d}; }
inline rmat2 operator-(const rmat2& u, const rmat2& v) { return {u.a - v.a, u.b - v.b, u.c - v.c, u.d - v.d}; }
inline rmat2 operator*(double s, const rmat2& u) { return {s * u.a, s * u.b, s * u.c, s * u.d}; }

inline rmat2 operator*(const rmat2& u, const rmat2& v) {
    return {u.a * v.a + u.b * v.c, u.a * v.b + u.b * v.d,
            u.c * v.a + u.d * v.c, u.c * v.b + u.d * v.d};
}

inline rmat2 commutator(const rmat2& u, const rmat2& v) { return u * v - v * u; }
inline double trace(const rmat2& u) { return u.a + u.d; }
inline double det(const rmat2& u) { return u.a * u.d - u.b * u.c; }

inline double frobenius_norm(const rmat2& u) {
    return std::sqrt(u.a * u.a + u.b * u.b + u.c * u.c + u.d * u.d);
}

}  // namespace jos

#endif
