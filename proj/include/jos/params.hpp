#ifndef JOS_PARAMS_HPP
#define JOS_PARAMS_HPP

#include <string>

namespace jos {

// Parameters of the overdamped-junction torus flow
//   dphi/dt = -sin(phi) + B + A cos(omega t).
struct PhysParams {
    double B = 0.0;      // abscissa
    double A = 0.0;      // ordinate
    double omega = 1.0;  // frequency, must be positive

    void validate() const;
};

// The (ell, mu, eta) chart:  ell = B/omega, mu = A/(2 omega), eta = 1/omega.
// In these coordinates the flow reads dtheta/dtau = eta cos(theta) + ell + 2 mu cos(tau).
struct ReducedParams {
    double ell = 0.0;
    double mu = 0.0;
    double eta = 1.0;  // must be positive

    void validate() const;
};

// Parameters of the associated double confluent Heun equation:
// lambda = 1/(4 omega^2) - mu^2.
struct HeunParams {
    double ell = 0.0;
    double mu = 0.0;
    double lambda = 0.0;

    void validate() const;  // checks lambda + mu^2 > 0
};

ReducedParams to_reduced(const PhysParams& p);
PhysParams from_reduced(const ReducedParams& rp);
HeunParams to_heun(const PhysParams& p);
HeunParams to_heun(const ReducedParams& rp);

// JSON with exact field names B, A, omega / ell, mu, eta / ell, mu, lambda.
std::string to_json(const PhysParams& p);
std::string to_json(const ReducedParams& rp);
std::string to_json(const HeunParams& hp);
PhysParams phys_from_json(const std::string& text);
ReducedParams reduced_from_json(const std::string& text);
HeunParams heun_from_json(const std::string& text);

}  // namespace jos

#endif
