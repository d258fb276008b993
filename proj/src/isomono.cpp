#include "jos/isomono.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jos {

namespace {

mat2 to_complex(const rmat2& m) { return m.complex(); }

// Hermite root location inside one accepted step for component idx.
template <std::size_t N>
std::optional<double> step_root(const OdeStep<N>& st, std::size_t idx) {
    const double v0 = st.y0[idx], v1 = st.y1[idx];
    if (v0 == 0.0) return st.t0;
    if (!(v0 * v1 < 0.0)) return std::nullopt;
    double lo = st.t0, hi = st.t1;
    double flo = v0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = st.eval(mid)[idx];
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * (1.0 + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

// ------------------------------------------------------------------
// general flow
// ------------------------------------------------------------------

LinearSystem GeneralJimboState::system() const {
    LinearSystem sys;
    sys.K2 = cplx(-1.0) * to_complex(Ktilde);
    sys.K1 = to_complex(R);
    sys.K0 = to_complex(N);
    return sys;
}

GeneralFlowReport isoflow_general(const GeneralJimboState& st, double t1, const OdeSettings& s) {
    if (st.t * t1 <= 0.0) throw domain_error("isoflow_general: t path must not cross 0");

    const rmat2 K0 = st.K();
    const auto ev0 = eigenvalues(to_complex(K0));

    // state: K (4), R (4); N is constant
    std::array<double, 8> y{K0.a, K0.b, K0.c, K0.d, st.R.a, st.R.b, st.R.c, st.R.d};
    const rmat2 N = st.N;
    integrate_adaptive<8>(
        [&N](double t, const std::array<double, 8>& v, std::array<double, 8>& d) {
            const rmat2 K{v[0], v[1], v[2], v[3]};
            const rmat2 R{v[4], v[5], v[6], v[7]};
            const rmat2 dK = (1.0 / t) * commutator(R, K);
            const rmat2 dR = commutator(K, N);
            d = {dK.a, dK.b, dK.c, dK.d, dR.a, dR.b, dR.c, dR.d};
        },
        y, st.t, t1, s);

    GeneralFlowReport rep;
    rep.state.t = t1;
    const rmat2 K1{y[0], y[1], y[2], y[3]};
    rep.state.Ktilde = t1 * K1;
    rep.state.R = rmat2{y[4], y[5], y[6], y[7]};
    rep.state.N = N;

    const auto ev1 = eigenvalues(to_complex(K1));
    rep.eigenvalue_drift =
        std::min(std::abs(ev1[0] - ev0[0]) + std::abs(ev1[1] - ev0[1]),
                 std::abs(ev1[0] - ev0[1]) + std::abs(ev1[1] - ev0[0]));
    rep.n_drift = 0.0;
    return rep;
}

// ------------------------------------------------------------------
// normalized flow
// ------------------------------------------------------------------

LinearSystem NormalizedJimboState::system() const {
    LinearSystem sys;
    sys.K2 = cplx(-tau) * to_complex(K);
    sys.K1 = to_complex(R());
    sys.K0 = to_complex(rmat2::diag(-0.5 * tau, 0.0));
    return sys;
}

namespace {

// membership defect: R must map ker(K) into the 1/2-eigenline of K.
double membership_defect(const rmat2& K, const rmat2& R) {
    const mat2 Kc = K.complex();
    const auto ev = eigenvalues(Kc);
    // eigenvalues should be {1/2, 0}; order them
    const bool first_is_half = std::abs(ev[0] - 0.5) < std::abs(ev[1] - 0.5);
    const cplx lam1 = first_is_half ? ev[0] : ev[1];
    const cplx lam2 = first_is_half ? ev[1] : ev[0];
    const vec2 v1 = eigenvector(Kc, lam1);
    const vec2 v2 = eigenvector(Kc, lam2);
    // left covector orthogonal to v1
    const cplx w2x = -v1.y, w2y = v1.x;
    const mat2 Rc = R.complex();
    const vec2 Rv2 = Rc * v2;
    const cplx F = w2x * Rv2.x + w2y * Rv2.y;
    const double n1 = std::sqrt(std::norm(v1.x) + std::norm(v1.y));
    const double n2 = std::sqrt(std::norm(v2.x) + std::norm(v2.y));
    return std::abs(F) / (frobenius_norm(Rc) * n1 * n2 + 1e-300);
}

}  // namespace

void NormalizedJimboState::validate(double tol) const {
    if (!(tau > 0.0)) throw domain_error("NormalizedJimboState: tau must be positive");
    if (!(R21 > 0.0)) throw domain_error("NormalizedJimboState: R21 must be positive");
    if (std::abs(trace(K) - 0.5) > tol)
        throw domain_error("NormalizedJimboState: trace of K must be 1/2");
    if (std::abs(det(K)) > tol) throw domain_error("NormalizedJimboState: K must be singular");
    if (membership_defect(K, R()) > std::max(tol, 1e-7))
        throw domain_error("NormalizedJimboState: (K, R) violates the membership constraint");
}

NormalizedJimboState NormalizedJimboState::from_josephson(const ReducedParams& rp) {
    rp.validate();
    if (!(rp.mu > 0.0)) throw domain_error("from_josephson: mu must be positive");
    NormalizedJimboState st;
    st.tau = 2.0 * rp.mu;
    st.ell = rp.ell;
    st.R21 = 0.5 * rp.eta;
    st.K = rmat2::diag(0.5, 0.0);
    return st;
}

ReducedParams NormalizedJimboState::to_josephson(double tol) const {
    if (std::abs(K.b) > tol || std::abs(K.c) > tol || std::abs(K.a - 0.5) > tol)
        throw numerics_error("to_josephson: state is not of torus-flow type");
    return {ell, 0.5 * tau, 2.0 * R21};
}

NormalizedJimboState normalized_from_chart(double G21, double R21, double ell, double tau) {
    if (!(R21 > 0.0)) throw domain_error("normalized_from_chart: R21 must be positive");
    if (!(tau > 0.0)) throw domain_error("normalized_from_chart: tau must be positive");
    const double denom = G21 * ell + R21 * (1.0 + G21 * G21);
    // the chart denominator cannot vanish for R21 != 0 (its zero would force
    // G21 = 0 where the denominator equals R21)
    const double G12 = -G21 * R21 / denom;
    const double G22 = 1.0 + G12 * G21;
    // K = G diag(1/2,0) G^{-1}, det G = 1
    const rmat2 G{1.0, G12, G21, G22};
    const rmat2 Gi{G22, -G12, -G21, 1.0};
    const rmat2 K = G * rmat2::diag(0.5, 0.0) * Gi;

    NormalizedJimboState st;
    st.tau = tau;
    st.ell = ell;
    st.R21 = R21;
    st.K = K;
    st.validate(1e-10);
    return st;
}

double w_of(const NormalizedJimboState& st) { return st.R21 / (st.tau * st.K.b); }

namespace {

struct NormalizedRhs {
    double ell;
    void operator()(double tau, const std::array<double, 5>& v, std::array<double, 5>& d) const {
        const rmat2 K{v[0], v[1], v[2], v[3]};
        const double R21 = v[4];
        const rmat2 R{-ell, -R21, R21, 0.0};
        const rmat2 N = rmat2::diag(-0.5, 0.0);
        const double u = tau * (K.c - K.b) / R21;
        const rmat2 dK = (2.0 / tau) * commutator(R, K) + u * commutator(N, K);
        // R keeps its shape; only the off-diagonal entry moves
        const double dR21 = -tau * K.c + 0.5 * u * R21;
        d = {dK.a, dK.b, dK.c, dK.d, dR21};
    }
};

// project K back onto {trace 1/2, determinant 0} keeping its eigenvectors,
// then apply one Newton step to R21 for the membership constraint.
void project_state(std::array<double, 5>& v, double ell) {
    rmat2 K{v[0], v[1], v[2], v[3]};
    const mat2 Kc = K.complex();
    const auto ev = eigenvalues(Kc);
    const bool first_is_half = std::abs(ev[0] - 0.5) < std::abs(ev[1] - 0.5);
    const cplx lam1 = first_is_half ? ev[0] : ev[1];
    const cplx lam2 = first_is_half ? ev[1] : ev[0];
    if (std::abs(lam1 - lam2) > 1e-3) {
        // K_proj = (K - lam2) * (1/2) / (lam1 - lam2): eigenvalues -> {1/2, 0}
        const mat2 P = (cplx(0.5) / (lam1 - lam2)) * (Kc - mat2::diag(lam2, lam2));
        K = rmat2{P.a.real(), P.b.real(), P.c.real(), P.d.real()};
        v[0] = K.a;
        v[1] = K.b;
        v[2] = K.c;
        v[3] = K.d;
    }
    // Newton step on R21 for the membership defect (linear in R entries)
    const double R21 = v[4];
    const rmat2 R{-ell, -R21, R21, 0.0};
    const double f0 = membership_defect(K, R);
    if (f0 > 1e-13) {
        const double dr = std::max(1e-9, 1e-6 * R21);
        const rmat2 Rp{-ell, -(R21 + dr), R21 + dr, 0.0};
        const rmat2 Rm{-ell, -(R21 - dr), R21 - dr, 0.0};
        // defect is |F|; use a signed version through the raw functional
        const double fp = membership_defect(K, Rp);
        const double fm = membership_defect(K, Rm);
        const double der = (fp - fm) / (2.0 * dr);
        if (std::abs(der) > 1e-8) {
            const double r_new = R21 - f0 / der;
            if (r_new > 0.0 && std::abs(r_new - R21) < 0.1 * R21 &&
                membership_defect(K, rmat2{-ell, -r_new, r_new, 0.0}) < f0)
                v[4] = r_new;
        }
    }
}

double structural_drift(const std::array<double, 5>& v, double ell) {
    const rmat2 K{v[0], v[1], v[2], v[3]};
    const rmat2 R{-ell, -v[4], v[4], 0.0};
    return std::max({std::abs(trace(K) - 0.5), std::abs(det(K)), membership_defect(K, R)});
}

}  // namespace

NormalizedSample NormalizedTrajectory::at(double tau) const {
    for (const auto& st : steps) {
        const double lo = std::min(st.t0, st.t1), hi = std::max(st.t0, st.t1);
        if (tau >= lo - 1e-12 && tau <= hi + 1e-12) {
            const auto y = st.eval(std::clamp(tau, lo, hi));
            return {tau, rmat2{y[0], y[1], y[2], y[3]}, y[4]};
        }
    }
    throw domain_error("NormalizedTrajectory::at: tau outside the trajectory span");
}

NormalizedSample NormalizedTrajectory::front() const {
    const auto& st = steps.front();
    return {st.t0, rmat2{st.y0[0], st.y0[1], st.y0[2], st.y0[3]}, st.y0[4]};
}

NormalizedSample NormalizedTrajectory::back() const {
    const auto& st = steps.back();
    return {st.t1, rmat2{st.y1[0], st.y1[1], st.y1[2], st.y1[3]}, st.y1[4]};
}

std::vector<std::pair<double, double>> NormalizedTrajectory::w_samples(double h) const {
    std::vector<std::pair<double, double>> out;
    if (steps.empty()) return out;
    const double a = steps.front().t0, b = steps.back().t1;
    const int n = static_cast<int>(std::floor(std::abs(b - a) / h));
    const double dir = (b >= a) ? 1.0 : -1.0;
    out.reserve(static_cast<std::size_t>(n) + 1);
    std::size_t cursor = 0;
    for (int i = 0; i <= n; ++i) {
        const double tau = a + dir * h * i;
        while (cursor + 1 < steps.size() &&
               ((dir > 0 && tau > steps[cursor].t1 + 1e-15) ||
                (dir < 0 && tau < steps[cursor].t1 - 1e-15)))
            ++cursor;
        const auto y = steps[cursor].eval(tau);
        out.emplace_back(tau, y[4] / (tau * y[1]));
    }
    return out;
}

NormalizedTrajectory isoflow_normalized(const NormalizedJimboState& st0, double tau1,
                                        const OdeSettings& s) {
    st0.validate();
    if (!(tau1 > 0.0)) throw domain_error("isoflow_normalized: tau1 must be positive");

    NormalizedTrajectory traj;
    traj.ell = st0.ell;
    std::array<double, 5> y{st0.K.a, st0.K.b, st0.K.c, st0.K.d, st0.R21};
    NormalizedRhs rhs{st0.ell};

    integrate_adaptive<5>(rhs, y, st0.tau, tau1, s, [&](const OdeStep<5>& step) {
        if (step.y1[4] <= 1e-10)
            throw numerics_error("isoflow_normalized: R21 -> 0, leaving the chart");
        auto& mut = const_cast<OdeStep<5>&>(step);
        const double drift = structural_drift(step.y1, st0.ell);
        traj.max_structural_drift = std::max(traj.max_structural_drift, drift);
        if (drift > 1e-11) {
            project_state(mut.y1, st0.ell);
            ++traj.projections;
        }
        traj.steps.push_back(mut);
        return true;
    });
    return traj;
}

std::vector<JosCrossing> detect_jos_crossing(const NormalizedTrajectory& traj) {
    std::vector<JosCrossing> out;
    if (traj.steps.empty()) return out;

    std::vector<double> zeros;
    // initial point counts when it starts on the locus
    if (std::abs(traj.steps.front().y0[1]) < 1e-9) zeros.push_back(traj.steps.front().t0);
    for (const auto& st : traj.steps) {
        const auto root = step_root(st, 1);
        if (root && (zeros.empty() || std::abs(*root - zeros.back()) > 1e-9))
            zeros.push_back(*root);
    }

    const double span = std::abs(traj.steps.back().t1 - traj.steps.front().t0);
    const double h = std::max(1e-4, span / 20000.0);

    for (double tau0 : zeros) {
        JosCrossing c;
        c.tau0 = tau0;
        c.K_at = traj.at(tau0).K;
        // residue fit on (tau - tau0) * w over [5h, 50h] on both sides
        std::vector<std::pair<double, double>> pts;  // (dt, dt*w)
        const double lo = traj.steps.front().t0, hi = traj.steps.back().t1;
        for (int side : {-1, 1}) {
            for (int i = 5; i <= 50; ++i) {
                const double tau = tau0 + side * i * h;
                if (tau <= std::min(lo, hi) || tau >= std::max(lo, hi)) continue;
                const auto smp = traj.at(tau);
                const double w = smp.R21 / (tau * smp.K.b);
                if (!std::isfinite(w)) continue;
                pts.emplace_back(tau - tau0, (tau - tau0) * w);
            }
        }
        if (pts.size() < 8) {
            c.fitted = false;
            out.push_back(c);
            continue;
        }
        // linear least squares  dt*w ~ res + slope*dt
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, yv] : pts) {
            sx += x;
            sy += yv;
            sxx += x * x;
            sxy += x * yv;
        }
        const double n = double(pts.size());
        const double den = n * sxx - sx * sx;
        c.residue_estimate = (sy * sxx - sx * sxy) / den;
        c.fitted = true;
        out.push_back(c);
    }
    return out;
}

std::vector<double> p3_residual_pointwise(const std::vector<std::pair<double, double>>& w,
                                          double ell) {
    std::vector<double> out(w.size(), std::nan(""));
    if (w.size() < 5) return out;
    const double h = w[1].first - w[0].first;
    auto usable = [&](std::size_t i) {
        const double v = std::abs(w[i].second);
        return std::isfinite(v) && v > 0.1 && v < 10.0;
    };
    for (std::size_t i = 2; i + 2 < w.size(); ++i) {
        bool ok = true;
        for (std::size_t k = i - 2; k <= i + 2; ++k) ok = ok && usable(k);
        if (!ok) continue;
        const double tau = w[i].first, v = w[i].second;
        const double d1 = (-w[i + 2].second + 8.0 * w[i + 1].second - 8.0 * w[i - 1].second +
                           w[i - 2].second) /
                          (12.0 * h);
        const double d2 = (-w[i + 2].second + 16.0 * w[i + 1].second - 30.0 * v +
                           16.0 * w[i - 1].second - w[i - 2].second) /
                          (12.0 * h * h);
        const double rhs = d1 * d1 / v - d1 / tau - 2.0 * ell * v * v / tau +
                           (2.0 * ell - 2.0) / tau + v * v * v - 1.0 / v;
        out[i] = std::abs(d2 - rhs);
    }
    return out;
}

P3Residual p3_residual(const std::vector<std::pair<double, double>>& w, double ell) {
    P3Residual rep;
    if (w.size() < 5) return rep;
    const auto pw = p3_residual_pointwise(w, ell);
    for (std::size_t i = 2; i + 2 < w.size(); ++i) {
        if (std::isnan(pw[i])) {
            ++rep.skipped;
            continue;
        }
        rep.max_residual = std::max(rep.max_residual, pw[i]);
        ++rep.used;
    }
    return rep;
}

// ------------------------------------------------------------------
// dynamical foliation
// ------------------------------------------------------------------

void DynFoliationState::validate() const {
    if (!(s > 0.0)) throw domain_error("DynFoliationState: s must be positive");
    if (psi == 0.0 && a == 0.0) throw domain_error("DynFoliationState: (a, psi) = (0, 0)");
}

namespace {

// psi' = a + (1 - ell) psi / s - a psi^2 / s^2
// a'   = -psi + ell a / s + psi a^2 / s^2
// nu'  = d/ds (ell + psi a / s) with ell evaluated from the current state,
// so that ell = nu - psi a / s is a genuine numerical invariant.
void dyn_rhs(double s, const std::array<double, 3>& v, std::array<double, 3>& d) {
    const double psi = v[0], a = v[1], nu = v[2];
    const double ell = nu - psi * a / s;
    const double dpsi = a + (1.0 - ell) * psi / s - a * psi * psi / (s * s);
    const double da = -psi + ell * a / s + psi * a * a / (s * s);
    const double dnu = (dpsi * a + psi * da) / s - psi * a / (s * s);
    d = {dpsi, da, dnu};
}

}  // namespace

DynSample DynTrajectory::at(double s) const {
    for (const auto& st : steps) {
        const double lo = std::min(st.t0, st.t1), hi = std::max(st.t0, st.t1);
        if (s >= lo - 1e-12 && s <= hi + 1e-12) {
            const auto y = st.eval(std::clamp(s, lo, hi));
            return {s, y[0], y[1], y[2]};
        }
    }
    throw domain_error("DynTrajectory::at: s outside the trajectory span");
}

DynSample DynTrajectory::front() const {
    const auto& st = steps.front();
    return {st.t0, st.y0[0], st.y0[1], st.y0[2]};
}

DynSample DynTrajectory::back() const {
    const auto& st = steps.back();
    return {st.t1, st.y1[0], st.y1[1], st.y1[2]};
}

std::vector<std::pair<double, double>> DynTrajectory::w_samples(double h) const {
    std::vector<std::pair<double, double>> out;
    if (steps.empty()) return out;
    const double a0 = steps.front().t0, b = steps.back().t1;
    const int n = static_cast<int>(std::floor(std::abs(b - a0) / h));
    const double dir = (b >= a0) ? 1.0 : -1.0;
    std::size_t cursor = 0;
    for (int i = 0; i <= n; ++i) {
        const double s = a0 + dir * h * i;
        while (cursor + 1 < steps.size() &&
               ((dir > 0 && s > steps[cursor].t1 + 1e-15) ||
                (dir < 0 && s < steps[cursor].t1 - 1e-15)))
            ++cursor;
        const auto y = steps[cursor].eval(s);
        out.emplace_back(s, y[1] / y[0]);
    }
    return out;
}

std::vector<double> DynTrajectory::josephson_crossings() const {
    std::vector<double> out;
    const double s_start = steps.empty() ? 0.0 : steps.front().t0;
    for (const auto& st : steps) {
        const auto root = step_root(st, 0);
        if (!root) continue;
        if (std::abs(*root - s_start) < 1e-9) continue;
        const auto y = st.eval(*root);
        if (y[1] > 0.0) out.push_back(*root);  // transversal with a > 0
    }
    return out;
}

DynTrajectory dyn_foliation_flow(const DynFoliationState& st0, double s1, const OdeSettings& s) {
    st0.validate();
    if (!(s1 > 0.0)) throw domain_error("dyn_foliation_flow: s1 must be positive");
    DynTrajectory traj;
    const double ell0 = st0.ell();
    std::array<double, 3> y{st0.psi, st0.a, st0.nu};
    integrate_adaptive<3>(dyn_rhs, y, st0.s, s1, s, [&](const OdeStep<3>& step) {
        const double s_now = step.t1;
        const double ell_now = step.y1[2] - step.y1[0] * step.y1[1] / s_now;
        traj.ell_drift = std::max(traj.ell_drift, std::abs(ell_now - ell0));
        if (std::abs(step.y1[0]) + std::abs(step.y1[1]) < 1e-12)
            throw numerics_error("dyn_foliation_flow: (a, psi) degenerated to (0, 0)");
        traj.steps.push_back(step);
        return true;
    });
    return traj;
}

ReturnMapResult josephson_return_map(const PhysParams& p, bool forward, double span_factor,
                                     const OdeSettings& s) {
    const ReducedParams rp = to_reduced(p);
    if (!(rp.mu > 0.0)) throw domain_error("josephson_return_map: requires mu > 0");
    DynFoliationState st;
    st.s = 2.0 * rp.mu;
    st.psi = 0.0;
    st.a = rp.eta;
    st.nu = rp.ell;

    const double s1 = forward ? st.s * span_factor : st.s / span_factor;
    ReturnMapResult out;
    DynTrajectory traj;
    try {
        traj = dyn_foliation_flow(st, s1, s);
    } catch (const budget_error&) {
        out.status = ReturnStatus::BudgetExhausted;
        return out;
    }
    const auto crossings = traj.josephson_crossings();
    if (crossings.empty()) {
        out.status = ReturnStatus::NoCrossing;
        return out;
    }
    const double sc = crossings.front();
    const auto smp = traj.at(sc);
    const ReducedParams rq{rp.ell, 0.5 * sc, smp.a};
    out.status = ReturnStatus::Found;
    out.point = from_reduced(rq);
    out.s_crossing = sc;
    return out;
}

// ------------------------------------------------------------------
// CSV export
// ------------------------------------------------------------------

std::string trajectory_csv(const NormalizedTrajectory& traj, double h) {
    std::ostringstream os;
    os << "tau,K11,K12,K21,K22,R21,w,p3_residual\n";
    const auto ws = traj.w_samples(h);
    const auto pw = p3_residual_pointwise(ws, traj.ell);
    char line[320];
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto smp = traj.at(ws[i].first);
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.3e\n",
                      smp.tau, smp.K.a, smp.K.b, smp.K.c, smp.K.d, smp.R21, ws[i].second, pw[i]);
        os << line;
    }
    return os.str();
}

std::string trajectory_csv(const DynTrajectory& traj, double h) {
    std::ostringstream os;
    os << "s,psi,a,nu,ell,w,p3_residual\n";
    const auto ws = traj.w_samples(h);
    const auto pw = p3_residual_pointwise(ws, traj.front().ell());
    char line[320];
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto smp = traj.at(ws[i].first);
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.3e\n", smp.s,
                      smp.psi, smp.a, smp.nu, smp.ell(), ws[i].second, pw[i]);
        os << line;
    }
    return os.str();
}

}  // namespace jos
