#ifndef JOS_POINCARE_HPP
#define JOS_POINCARE_HPP

// The period-2pi flow map of the torus equation lifted to the real line,
// rotation numbers, and the displacement functional whose zeros on a grid
// certify that the map is the identity.

#include <string>
#include <vector>

#include "jos/flows.hpp"
#include "jos/mat2.hpp"
#include "jos/params.hpp"

namespace jos {

struct RotationResult {
    double rho = 0.0;
    enum class Method { MobiusEigenvalue, Iteration } method = Method::MobiusEigenvalue;
    int winding = 0;             // integer part contributed by the lift
    double certified_error = 0.0;

    std::string method_name() const {
        return method == Method::MobiusEigenvalue ? "mobius-eigenvalue" : "iteration";
    }
};

// Lifted period-2pi map P(theta0) = theta(2pi) with theta(0) = theta0.
double poincare_map(const ReducedParams& rp, double theta0, const OdeSettings& s = {});

// The Poincare map is the restriction of a Moebius transformation to the
// unit circle; this wraps the monodromy matrix of the associated linear
// system as that circle map together with a lift anchored at P(0).
class MobiusCircleMap {
  public:
    // m: monodromy matrix acting on (u, v) with Phi = v/u; p0 = lifted P(0).
    MobiusCircleMap(const mat2& m, double p0);

    double lift(double theta) const;                 // lifted image of theta
    double displacement_min() const { return dmin_; }
    double displacement_max() const { return dmax_; }
    cplx multiplier_interior_fixed_point() const;    // derivative at the fixed point in the open disk
    const mat2& matrix() const { return m_; }

  private:
    double raw_angle(double theta) const;  // principal argument of the image
    mat2 m_;
    double p0_;
    std::vector<double> grid_theta_, grid_lift_;
    double dmin_ = 0.0, dmax_ = 0.0;
};

// Rotation number rho(B, A; omega).  Uses the winding of the lifted flow over
// one period combined with the eigenvalue argument of the monodromy when the
// map is elliptic; falls back to orbit averaging when |trace| is within
// tolerance of 2 (parabolic band).
RotationResult rotation_number(const PhysParams& p, const OdeSettings& s = {});

// max over the grid of |P(theta) - theta - 2 pi ell|.
double displacement_sup(const ReducedParams& rp, int ell, const std::vector<double>& theta_grid,
                        const OdeSettings& s = {});

// Convenience: uniform n-point grid on [0, 2pi).
std::vector<double> uniform_theta_grid(int n);

}  // namespace jos

#endif
