#ifndef JOS_ISOMONO_HPP
#define JOS_ISOMONO_HPP

// Isomonodromic flows: the general commutator flow t K' = [R,K], R' = [K,N],
// its restriction to normalized real systems
//   Y' = (-tau K / z^2 + R / z + tau N) Y,  N = diag(-1/2, 0),
//   R = [[-ell, -R21], [R21, 0]],  K ~ diag(1/2, 0),
// the associated Painleve-3 functional w(tau) = R21/(tau K12) with pole
// detection (poles of residue 1 mark torus-flow systems), and the dynamical
// foliation of the four-parameter torus-flow family
//   dtheta/dtau = nu + a cos(theta) + s cos(tau) + psi cos(theta - tau).

#include <optional>
#include <string>
#include <vector>

#include "jos/mat2.hpp"
#include "jos/monodromy.hpp"
#include "jos/ode.hpp"
#include "jos/params.hpp"

namespace jos {

// ---------------- general flow ----------------

struct GeneralJimboState {
    double t = 1.0;
    rmat2 Ktilde;  // main term at 0, scaled: the system carries -Ktilde/z^2
    rmat2 R;
    rmat2 N;

    rmat2 K() const { return (1.0 / t) * Ktilde; }
    LinearSystem system() const;
};

struct GeneralFlowReport {
    GeneralJimboState state;
    double eigenvalue_drift = 0.0;  // drift of the eigenvalues of K
    double n_drift = 0.0;           // N is a first integral (exactly constant here)
};

GeneralFlowReport isoflow_general(const GeneralJimboState& st, double t1,
                                  const OdeSettings& s = {});

// ---------------- normalized real flow ----------------

struct NormalizedJimboState {
    double tau = 1.0;
    double ell = 0.0;
    double R21 = 1.0;
    rmat2 K = rmat2::diag(0.5, 0.0);

    rmat2 R() const { return rmat2{-ell, -R21, R21, 0.0}; }
    LinearSystem system() const;
    void validate(double tol = 1e-9) const;

    // Josephson-type member: K = diag(1/2, 0), tau = 2 mu, R21 = eta / 2.
    static NormalizedJimboState from_josephson(const ReducedParams& rp);
    // Inverse of the embedding (requires K12 = K21 = 0 up to tol).
    ReducedParams to_josephson(double tol = 1e-6) const;
};

// Build a state from the chart (G21, R21, ell, tau):
//   G = [[1, G12], [G21, 1 + G12 G21]],  G12 = -G21 R21 / (G21 ell + R21 (1 + G21^2)),
//   K = G diag(1/2, 0) G^{-1}.
NormalizedJimboState normalized_from_chart(double G21, double R21, double ell, double tau);

// w(tau) = R21 / (tau K12); +-inf at K12 = 0 (pole signal, not an error).
double w_of(const NormalizedJimboState& st);

struct NormalizedSample {
    double tau = 0.0;
    rmat2 K;
    double R21 = 0.0;
};

struct JosCrossing {
    double tau0 = 0.0;
    double residue_estimate = 0.0;
    bool fitted = true;  // false when the zero is not simple (flagged, not fitted)
    rmat2 K_at;          // interpolated K(tau0)
};

struct NormalizedTrajectory {
    double ell = 0.0;
    std::vector<OdeStep<5>> steps;  // state packing: K.a K.b K.c K.d R21
    double max_structural_drift = 0.0;   // before re-projection, per accepted step
    int projections = 0;

    NormalizedSample at(double tau) const;
    NormalizedSample front() const;
    NormalizedSample back() const;
    // uniform (tau, w) samples at spacing h
    std::vector<std::pair<double, double>> w_samples(double h) const;
};

// Integrate R' = 2 tau [K,N] + u [N,R], K' = (2/tau)[R,K] + u [N,K],
// u = tau (K21 - K12)/R21, with structural re-projection (trace/determinant
// of K, membership constraint) when drift exceeds 1e-11.
NormalizedTrajectory isoflow_normalized(const NormalizedJimboState& st, double tau1,
                                        const OdeSettings& s = {});

// Zeros of K12 along the trajectory with residue estimates for w, fitted on
// the window |tau - tau0| in [5h, 50h] on both sides.
std::vector<JosCrossing> detect_jos_crossing(const NormalizedTrajectory& traj);

struct P3Residual {
    double max_residual = 0.0;
    int used = 0;
    int skipped = 0;  // samples too close to a pole or zero of w
};

// max |w'' - RHS| over interior samples with 5-point central differences.
P3Residual p3_residual(const std::vector<std::pair<double, double>>& w_samples, double ell);

// per-sample residuals (NaN at edges and near poles/zeros of w).
std::vector<double> p3_residual_pointwise(const std::vector<std::pair<double, double>>& w_samples,
                                          double ell);

// ---------------- dynamical foliation ----------------

struct DynFoliationState {
    double s = 1.0;
    double psi = 0.0;
    double a = 1.0;
    double nu = 0.0;

    double ell() const { return nu - psi * a / s; }
    void validate() const;
};

struct DynSample {
    double s, psi, a, nu;
    double w() const { return a / psi; }
    double ell() const { return nu - psi * a / s; }
};

struct DynTrajectory {
    std::vector<OdeStep<3>> steps;  // packing: psi, a, nu
    double ell_drift = 0.0;

    DynSample at(double s) const;
    DynSample front() const;
    DynSample back() const;
    std::vector<std::pair<double, double>> w_samples(double h) const;
    // transversal psi = 0 crossings with a > 0, excluding the launch point
    std::vector<double> josephson_crossings() const;
};

DynTrajectory dyn_foliation_flow(const DynFoliationState& st, double s1,
                                 const OdeSettings& s = {});

// ---------------- return map ----------------

enum class ReturnStatus { Found, NoCrossing, BudgetExhausted };

struct ReturnMapResult {
    ReturnStatus status = ReturnStatus::NoCrossing;
    std::optional<PhysParams> point;
    double s_crossing = 0.0;
};

// Embed p as (nu, a, s, psi) = (ell, eta, 2 mu, 0), flow along the foliation
// until the next transversal psi = 0 crossing with a > 0, and map back with
// the same ell.  span_factor bounds the s-budget multiplicatively.
ReturnMapResult josephson_return_map(const PhysParams& p, bool forward,
                                     double span_factor = 7.389056098930650,
                                     const OdeSettings& s = {});

// CSV with columns s_or_tau, state fields, w, p3_residual.
std::string trajectory_csv(const NormalizedTrajectory& traj, double h);
std::string trajectory_csv(const DynTrajectory& traj, double h);

}  // namespace jos

#endif
