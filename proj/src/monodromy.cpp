#include "jos/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

namespace jos {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

// ------------------------------------------------------------------
// Projective helpers
// ------------------------------------------------------------------

static ProjPoint normalized(const ProjPoint& p) {
    const double n = std::sqrt(std::norm(p.x) + std::norm(p.y));
    if (!(n > 0.0)) throw numerics_error("ProjPoint: zero vector");
    return {p.x / n, p.y / n};
}

cplx proj_pair(const ProjPoint& p, const ProjPoint& q) {
    const ProjPoint a = normalized(p), b = normalized(q);
    return a.x * b.y - b.x * a.y;
}

ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                      const ProjPoint& d) {
    const cplx num = proj_pair(a, c) * proj_pair(b, d);
    const cplx den = proj_pair(a, d) * proj_pair(b, c);
    return {den, num};  // affine value num/den
}

// ------------------------------------------------------------------
// Josephson system and monodromy
// ------------------------------------------------------------------

LinearSystem josephson_coefficients(const ReducedParams& rp) {
    rp.validate();
    const double half_eta = 0.5 * rp.eta;  // 1/(2 omega)
    LinearSystem sys;
    sys.K2 = mat2::diag(-rp.mu, 0.0);
    sys.K1 = mat2{-rp.ell, -half_eta, half_eta, 0.0};
    sys.K0 = mat2::diag(-rp.mu, 0.0);
    return sys;
}

LinearSystem build_josephson_system(const ReducedParams& rp) {
    if (rp.mu == 0.0)
        throw domain_error("build_josephson_system: mu = 0 degenerates both singular points");
    return josephson_coefficients(rp);
}

mat2 monodromy_matrix(const LinearSystem& sys, const OdeSettings& s) {
    return flow_linear(sys, PathInCStar::circle_arc(0.0, kTwoPi), s);
}

bool is_monodromy_trivial(const LinearSystem& sys, double tol, const OdeSettings& s) {
    return frobenius_norm(monodromy_matrix(sys, s) - mat2::identity()) < tol;
}

// ------------------------------------------------------------------
// Formal residues
// ------------------------------------------------------------------

namespace {

bool effectively_diagonal(const mat2& m) {
    const double off = std::abs(m.b) + std::abs(m.c);
    const double scale = std::abs(m.a) + std::abs(m.d) + 1e-300;
    return off <= 1e-14 * scale;
}

bool ascending(const cplx& u, const cplx& v) {
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
}

// Eigen decomposition of the main term: columns of H are eigenvectors,
// eigenvalues ordered ascending by real part (ties by imaginary part).
// A main term that is already diagonal is left as it stands.
struct EigenSplit {
    cplx lambda1, lambda2;
    mat2 H, Hinv;
};

EigenSplit split_main_term(const mat2& m) {
    EigenSplit es;
    if (effectively_diagonal(m)) {
        es.lambda1 = m.a;
        es.lambda2 = m.d;
        es.H = mat2::identity();
        es.Hinv = mat2::identity();
    } else {
        auto ev = eigenvalues(m);
        if (!ascending(ev[0], ev[1])) std::swap(ev[0], ev[1]);
        es.lambda1 = ev[0];
        es.lambda2 = ev[1];
        const vec2 v1 = eigenvector(m, ev[0]);
        const vec2 v2 = eigenvector(m, ev[1]);
        es.H = mat2{v1.x, v2.x, v1.y, v2.y};
        const cplx dt = det(es.H);
        if (std::abs(dt) < 1e-14)
            throw numerics_error("split_main_term: eigenvector matrix is singular");
        es.Hinv = inverse(es.H);
    }
    const double scale = std::abs(es.lambda1) + std::abs(es.lambda2);
    if (std::abs(es.lambda1 - es.lambda2) <= 1e-12 * (scale + 1e-300))
        throw numerics_error("split_main_term: eigenvalue collision (resonant main term)");
    return es;
}

}  // namespace

mat2 formal_residue(const LinearSystem& sys, SingularPoint at) {
    const mat2& main = (at == SingularPoint::Zero) ? sys.K2 : sys.K0;
    const EigenSplit es = split_main_term(main);
    const mat2 conj = es.Hinv * sys.K1 * es.H;
    return mat2::diag(conj.a, conj.d);
}

// ------------------------------------------------------------------
// Stokes-type decomposition of a monodromy matrix
// ------------------------------------------------------------------

StokesDecomposition stokes_from_monodromy(const mat2& M, bool upper_first) {
    StokesDecomposition out;
    if (upper_first) {
        // M = diag(m1,m2) * [[1,0],[-c1,1]] * [[1,-c0],[0,1]]
        if (std::abs(M.a) < 1e-300)
            throw numerics_error("stokes_from_monodromy: pivot M11 vanishes");
        const cplx m1 = M.a;
        const cplx c0 = -M.b / M.a;
        const cplx m2 = M.d - M.b * M.c / M.a;
        if (std::abs(m2) < 1e-300)
            throw numerics_error("stokes_from_monodromy: formal monodromy entry vanishes");
        const cplx c1 = -M.c / m2;
        out.m_norm = mat2::diag(m1, m2);
        out.c0 = c0;
        out.c1 = c1;
        const mat2 C0{1.0, c0, 0.0, 1.0}, C1{1.0, 0.0, c1, 1.0};
        out.reconstruction_residual =
            frobenius_norm(out.m_norm * inverse(C1) * inverse(C0) - M);
    } else {
        // opposite triangular types: C0 lower, C1 upper
        if (std::abs(M.d) < 1e-300)
            throw numerics_error("stokes_from_monodromy: pivot M22 vanishes");
        const cplx m2 = M.d;
        const cplx c0 = -M.c / M.d;
        const cplx m1 = M.a - M.b * M.c / M.d;
        if (std::abs(m1) < 1e-300)
            throw numerics_error("stokes_from_monodromy: formal monodromy entry vanishes");
        const cplx c1 = -M.b / m1;
        out.m_norm = mat2::diag(m1, m2);
        out.c0 = c0;
        out.c1 = c1;
        const mat2 C0{1.0, 0.0, c0, 1.0}, C1{1.0, c1, 0.0, 1.0};
        out.reconstruction_residual =
            frobenius_norm(out.m_norm * inverse(C1) * inverse(C0) - M);
    }
    if (!(out.reconstruction_residual < 1e-10 * (1.0 + frobenius_norm(M))))
        throw numerics_error("stokes_from_monodromy: reconstruction residual too large");
    return out;
}

// ------------------------------------------------------------------
// q-points
// ------------------------------------------------------------------

namespace {

// In the local chart the system is Y' = (A2/z^2 + A1/z + A0)Y with
// A2 ~ diag(d1, d2); the canonical solution for eigen-index j is
// exp(-d_j/z) z^{r_j} H h(z) with r_j = (B1)_jj and h given by a two-term
// recurrence.  The series converges on all of C exactly when the germ is
// analytically equivalent to its diagonal normal form and the residue
// exponents are integers (the trivial-monodromy regime this is used in);
// convergence is monitored and reported.
struct SeriesResult {
    vec2 value;         // sum of the series at the evaluation point
    bool converged = false;
    double tail = 0.0;  // size of the last terms relative to the running scale
};

// Generic entry access for mat2 by indices.
inline cplx ent(const mat2& m, int r, int c) {
    if (r == 0) return c == 0 ? m.a : m.b;
    return c == 0 ? m.c : m.d;
}
inline cplx vent(const vec2& v, int i) { return i == 0 ? v.x : v.y; }
inline void vset(vec2& v, int i, cplx val) { (i == 0 ? v.x : v.y) = val; }

// Sum of the regularized series for direction j (0-based) of the local-chart
// system with diagonalized main term diag(d1,d2), residue B1 and constant
// term B0, evaluated at |z| = at (real, along the positive axis).
SeriesResult canonical_series(const cplx d1, const cplx d2, const mat2& B1, const mat2& B0,
                              int j, double at, int max_terms) {
    const int o = 1 - j;
    const cplx dj = (j == 0) ? d1 : d2;
    const cplx doo = (j == 0) ? d2 : d1;
    const cplx gap = doo - dj;
    const cplx rj = ent(B1, j, j);

    vec2 hk{}, hk1{}, hk2{};  // h_k, h_{k-1}, h_{k-2}
    vset(hk1, j, 1.0);        // h_0 = e_j
    vset(hk1, o, 0.0);

    vec2 sum = hk1;
    double scale = 1.0;
    double zk = at;  // at^k
    int quiet = 0, growing = 0;
    SeriesResult res;

    // Optimal truncation bookkeeping: near (but not exactly on) the
    // trivial-monodromy locus the terms decay to a floor set by the distance
    // to the locus and then grow again; the sum at the smallest term is the
    // best available value and the floor is the certified error.
    double best_rel = 1e300;
    vec2 best_sum{};
    double prev_term = 1e300;

    for (int k = 1; k <= max_terms; ++k) {
        // other component from row o of the recurrence
        const cplx num_o = (cplx(k - 1.0) - ent(B1, o, o) + rj) * vent(hk1, o) -
                           ent(B1, o, j) * vent(hk1, j) -
                           (ent(B0, o, 0) * vent(hk2, 0) + ent(B0, o, 1) * vent(hk2, 1));
        const cplx ho = num_o / gap;
        // distinguished component from row j at index k
        const cplx hj = (ent(B1, j, o) * ho +
                         (ent(B0, j, 0) * vent(hk1, 0) + ent(B0, j, 1) * vent(hk1, 1))) /
                        cplx(double(k));
        vset(hk, o, ho);
        vset(hk, j, hj);

        const double term = (std::abs(ho) + std::abs(hj)) * zk;
        const double rel = term / scale;
        if (rel < best_rel) {
            best_rel = rel;
            best_sum = sum;  // sum *before* adding the growing tail
        }
        sum.x += hk.x * zk;
        sum.y += hk.y * zk;
        scale = std::max(scale, std::abs(sum.x) + std::abs(sum.y));

        if (term < 1e-17 * scale) {
            if (++quiet >= 4) {
                res.converged = true;
                res.tail = 1e-16;
                res.value = sum;
                return res;
            }
        } else {
            quiet = 0;
        }
        growing = (term > prev_term) ? growing + 1 : 0;
        prev_term = term;
        if ((growing >= 12 && best_rel < 1e-4) || term > 1e280) break;

        hk2 = hk1;
        hk1 = hk;
        zk *= at;
    }

    if (best_rel < 1e-4) {
        // asymptotic regime: truncate at the smallest term
        res.converged = true;
        res.tail = best_rel;
        res.value = best_sum;
    } else {
        res.converged = false;
        res.tail = best_rel;
        res.value = sum;
    }
    return res;
}

// Projective Riccati integration of Y' = C(z) Y along the positive real
// segment from r0 to r1, with chart swapping Phi <-> 1/Phi.
ProjPoint riccati_along_segment(const LinearSystem& sys, ProjPoint start, double r0, double r1,
                                const OdeSettings& s) {
    ProjPoint cur = normalized(start);
    bool inverted = std::abs(cur.x) < std::abs(cur.y);  // track 1/Phi when Phi is large
    cplx v = inverted ? cur.x / cur.y : cur.y / cur.x;
    double r = r0;

    while (std::abs(r - r1) > 1e-15 * (1.0 + std::abs(r1))) {
        bool swapped = false;
        std::array<double, 2> y{v.real(), v.imag()};
        const bool inv = inverted;
        integrate_adaptive<2>(
            [&sys, inv](double rr, const std::array<double, 2>& yy, std::array<double, 2>& dd) {
                const mat2 C = sys.coefficient(cplx(rr, 0.0));
                const cplx w(yy[0], yy[1]);
                // affine chart: Phi' = c + (d-a) Phi - b Phi^2
                // inverted chart: Psi' = b + (a-d) Psi - c Psi^2
                const cplx dw = inv ? (C.b + (C.a - C.d) * w - C.c * w * w)
                                    : (C.c + (C.d - C.a) * w - C.b * w * w);
                dd = {dw.real(), dw.imag()};
            },
            y, r, r1, s,
            [&](const OdeStep<2>& st) {
                r = st.t1;
                if (st.y1[0] * st.y1[0] + st.y1[1] * st.y1[1] > 4.0) {
                    v = cplx(st.y1[0], st.y1[1]);
                    swapped = true;
                    return false;
                }
                return true;
            });
        if (swapped) {
            v = 1.0 / v;
            inverted = !inverted;
        } else {
            v = cplx(y[0], y[1]);
            r = r1;
        }
    }
    return inverted ? ProjPoint{v, 1.0} : ProjPoint{1.0, v};
}

struct DirectionResult {
    ProjPoint q;
    double err;
};

// q-point for one direction at one singular point.  stable_by_riccati tells
// whether forward integration toward the base point contracts onto this
// direction (then the seeded Riccati run is a valid fallback/cross-check).
DirectionResult q_direction(const LinearSystem& sys, SingularPoint p, int j, double eps,
                            const OdeSettings& s) {
    // local chart data
    mat2 A2, A1, A0;
    if (p == SingularPoint::Zero) {
        A2 = sys.K2;
        A1 = sys.K1;
        A0 = sys.K0;
    } else {
        A2 = cplx(-1.0) * sys.K0;
        A1 = cplx(-1.0) * sys.K1;
        A0 = cplx(-1.0) * sys.K2;
    }
    // Indexing is fixed by the z-chart main term (K2 at 0, K0 at infinity)
    // with eigenvalues ascending; in the w-chart at infinity the eigenvalues
    // are negated, so the local order flips there.
    const mat2& zmain = (p == SingularPoint::Zero) ? sys.K2 : sys.K0;
    const EigenSplit es = split_main_term(zmain);
    // local-chart eigenvalues for the series
    const cplx d1 = (p == SingularPoint::Zero) ? es.lambda1 : -es.lambda1;
    const cplx d2 = (p == SingularPoint::Zero) ? es.lambda2 : -es.lambda2;
    const mat2 B2 = es.Hinv * A2 * es.H;  // = diag(d1, d2)
    (void)B2;
    const mat2 B1 = es.Hinv * A1 * es.H;
    const mat2 B0 = es.Hinv * A0 * es.H;

    // Primary route: sum the regularized series directly at the base point.
    const SeriesResult sr = canonical_series(d1, d2, B1, B0, j, 1.0, 800);
    if (sr.converged) {
        const vec2 f = es.H * sr.value;
        return {normalized({f.x, f.y}), std::max(1e-14, 4.0 * sr.tail)};
    }

    // Fallback: seeded Riccati integration from near the singular point.
    // Valid only for the direction the forward flow contracts onto: larger
    // real-part eigenvalue at 0, smaller at infinity (z-chart).
    const bool stable = (p == SingularPoint::Zero) ? (j == 1) : (j == 0);
    if (!stable)
        throw numerics_error(
            "q_points: series for a repelling canonical direction did not converge");

    // first-order seed from the same recurrence
    const SeriesResult seed = canonical_series(d1, d2, B1, B0, j, eps, 2);
    const vec2 f_eps = es.H * seed.value;
    ProjPoint cur = normalized({f_eps.x, f_eps.y});
    if (p == SingularPoint::Zero) {
        cur = riccati_along_segment(sys, cur, eps, 1.0, s);
    } else {
        cur = riccati_along_segment(sys, cur, 1.0 / eps, 1.0, s);
    }
    return {cur, 1e-8};
}

}  // namespace

MonodromyStokesData q_points(const LinearSystem& sys, const OdeSettings& s) {
    // heuristic seeding radius, small enough that the first-order seed is
    // accurate, large enough that the irregular factor does not underflow
    const double mu_est = frobenius_norm(sys.K2);
    const double eta_est = std::abs(sys.K1.b - sys.K1.c);
    const double eps = std::min(0.05, 0.1 / (1.0 + mu_est * eta_est));

    MonodromyStokesData out;
    const auto a = q_direction(sys, SingularPoint::Zero, 0, eps, s);
    const auto b = q_direction(sys, SingularPoint::Zero, 1, eps, s);
    const auto c = q_direction(sys, SingularPoint::Infinity, 0, eps, s);
    const auto d = q_direction(sys, SingularPoint::Infinity, 1, eps, s);
    out.q10 = a.q;
    out.q20 = b.q;
    out.q1inf = c.q;
    out.q2inf = d.q;
    out.certified_error = std::max(std::max(a.err, b.err), std::max(c.err, d.err));
    out.M = monodromy_matrix(sys, s);
    out.base_point = 1.0;
    return out;
}

ProjPoint transition_cross_ratio(const LinearSystem& sys, const OdeSettings& s) {
    const MonodromyStokesData data = q_points(sys, s);
    return cross_ratio(data.q10, data.q20, data.q1inf, data.q2inf);
}

// ------------------------------------------------------------------
// JSON
// ------------------------------------------------------------------

namespace {
nlohmann::ordered_json proj_to_json(const ProjPoint& p) {
    if (p.is_infinite(1e-14)) return "inf";
    const cplx v = p.value();
    return nlohmann::ordered_json::array({v.real(), v.imag()});
}
nlohmann::ordered_json cplx_to_json(const cplx& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}
}  // namespace

std::string MonodromyStokesData::to_json() const {
    nlohmann::ordered_json j;
    j["q"] = {proj_to_json(q10), proj_to_json(q20), proj_to_json(q1inf), proj_to_json(q2inf)};
    j["M"] = {{cplx_to_json(M.a), cplx_to_json(M.b)}, {cplx_to_json(M.c), cplx_to_json(M.d)}};
    j["base_point"] = cplx_to_json(base_point);
    j["certified_error"] = certified_error;
    return j.dump();
}

}  // namespace jos
