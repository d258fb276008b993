#ifndef JOS_PORTRAIT_HPP
#define JOS_PORTRAIT_HPP

// Phase-lock-area portraits: boundary curves B = G_{r,alpha}(A), growth
// points on the abscissa axis, constriction search on the area axes with
// type certification, ghost scan, and Bessel-asymptotics error evaluation.

#include <optional>
#include <string>
#include <vector>

#include "jos/ode.hpp"
#include "jos/params.hpp"

namespace jos {

enum class FixedPointFlavor { Zero, Pi };

struct BoundaryPoint {
    int r = 0;
    FixedPointFlavor alpha = FixedPointFlavor::Zero;
    double A = 0.0;
    double B = 0.0;  // = G_{r,alpha}(A)
    double omega = 1.0;
};

enum class ConstrictionType { Positive, Negative, Neutral };

struct Constriction {
    int ell = 0;
    double A = 0.0;
    double omega = 1.0;
    double B = 0.0;  // = ell * omega up to the search tolerance
    double residual = 0.0;          // displacement sup on a 64-point grid
    double monodromy_distance = 0.0;  // ||M - Id||_F after refinement
    double heun_score = 0.0;          // entire-solution score at the point
    ConstrictionType type = ConstrictionType::Positive;
};

struct BoundaryCurve {
    int r = 0;
    FixedPointFlavor alpha = FixedPointFlavor::Zero;
    std::vector<BoundaryPoint> points;  // ascending in A
};

struct GrowthPoint {
    int r = 0;
    double B = 0.0;
};

struct PortraitConfig {
    double omega = 2.0;
    int r_max = 3;          // curves traced for r in [-r_max, r_max]
    double a_max = 8.0;
    int samples_per_curve = 40;
    int constriction_ell_max = 2;  // axes scanned for constrictions: 1..ell_max
    int workers = 1;
    unsigned seed = 0;  // recorded in the metadata for reproducibility
    OdeSettings ode;
};

struct Portrait {
    PortraitConfig config;
    std::vector<GrowthPoint> growth_points;
    std::vector<BoundaryCurve> curves;
    std::vector<Constriction> constrictions;
};

// sign(r) * sqrt(r^2 omega^2 + 1); the point where the r-th area meets A = 0.
double growth_point(int r, double omega);

// Solve P_B(alpha) = alpha + 2 pi r for B in the bracket (Brent; the
// displacement is strictly increasing in B).
BoundaryPoint boundary_point(int r, FixedPointFlavor alpha, double A, double omega,
                             double b_lo, double b_hi, const OdeSettings& s = {});

// Find a bracket around the boundary automatically (expanding scan).
BoundaryPoint boundary_point_auto(int r, FixedPointFlavor alpha, double A, double omega,
                                  const OdeSettings& s = {});

// Scan the axis B = ell*omega for trivial-monodromy points with A in
// (a_lo, a_hi]; each accepted point is refined to ||M - Id|| < 1e-7 and
// cross-validated by the displacement functional and the Heun score.
std::vector<Constriction> find_constrictions(int ell, double omega, double a_lo, double a_hi,
                                             const OdeSettings& s = {});

// Probe the rotation number at (ell*omega, A +/- delta) for a decreasing
// sequence of deltas with interior certification.
ConstrictionType constriction_type(const Constriction& c, double delta, const OdeSettings& s = {});

// Unconstrained 2-D minimization of ||M(B,A) - Id|| seeded off-axis; returns
// the located (B, A).
std::pair<double, double> off_axis_constriction_search(const Constriction& c, double seed_offset,
                                                       const OdeSettings& s = {});

struct GhostScanReport {
    int checked = 0;
    std::vector<std::string> violations;
    std::vector<Constriction> constrictions;
};

// Verify rho = ell and positive type for every constriction found on the axis.
GhostScanReport ghost_scan(int ell, double omega, double a_hi = 10.0, const OdeSettings& s = {});

// Deviations of the traced boundaries from the Bessel asymptotic heads:
//   e0  = |G_{r,0}(A)  - r omega + J_r(-A/omega)|
//   epi = |G_{r,pi}(A) - r omega - J_r(-A/omega)|
std::pair<double, double> asymptotic_error(int r, double omega, double A,
                                           const OdeSettings& s = {});

Portrait trace_portrait(const PortraitConfig& cfg);

// Serialization (schema "portrait-v1"); all exports are deterministic for a
// fixed config.
std::string portrait_json(const Portrait& p);
std::string portrait_csv(const Portrait& p);
std::string portrait_svg(const Portrait& p);
void export_portrait(const Portrait& p, const std::string& format, const std::string& path);

// Deterministic index-parallel map used for sweeps.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace jos

#endif
