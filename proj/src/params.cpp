#include "jos/params.hpp"

#include <cmath>

#include <json.hpp>

#include "jos/errors.hpp"

namespace jos {

namespace {
void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw domain_error(std::string(name) + " must be finite");
}
}  // namespace

void PhysParams::validate() const {
    require_finite(B, "B");
    require_finite(A, "A");
    require_finite(omega, "omega");
    if (!(omega > 0.0)) throw domain_error("omega must be positive");
}

void ReducedParams::validate() const {
    require_finite(ell, "ell");
    require_finite(mu, "mu");
    require_finite(eta, "eta");
    if (!(eta > 0.0)) throw domain_error("eta must be positive");
}

void HeunParams::validate() const {
    require_finite(ell, "ell");
    require_finite(mu, "mu");
    require_finite(lambda, "lambda");
    if (!(lambda + mu * mu > 0.0)) throw domain_error("lambda + mu^2 must be positive");
}

ReducedParams to_reduced(const PhysParams& p) {
    p.validate();
    return {p.B / p.omega, p.A / (2.0 * p.omega), 1.0 / p.omega};
}

PhysParams from_reduced(const ReducedParams& rp) {
    rp.validate();
    const double omega = 1.0 / rp.eta;
    return {rp.ell * omega, 2.0 * rp.mu * omega, omega};
}

HeunParams to_heun(const PhysParams& p) {
    p.validate();
    const double mu = p.A / (2.0 * p.omega);
    return {p.B / p.omega, mu, 1.0 / (4.0 * p.omega * p.omega) - mu * mu};
}

HeunParams to_heun(const ReducedParams& rp) {
    rp.validate();
    return {rp.ell, rp.mu, 0.25 * rp.eta * rp.eta - rp.mu * rp.mu};
}

std::string to_json(const PhysParams& p) {
    nlohmann::ordered_json j{{"B", p.B}, {"A", p.A}, {"omega", p.omega}};
    return j.dump();
}

std::string to_json(const ReducedParams& rp) {
    nlohmann::ordered_json j{{"ell", rp.ell}, {"mu", rp.mu}, {"eta", rp.eta}};
    return j.dump();
}

std::string to_json(const HeunParams& hp) {
    nlohmann::ordered_json j{{"ell", hp.ell}, {"mu", hp.mu}, {"lambda", hp.lambda}};
    return j.dump();
}

PhysParams phys_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PhysParams p{j.at("B").get<double>(), j.at("A").get<double>(), j.at("omega").get<double>()};
    p.validate();
    return p;
}

ReducedParams reduced_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ReducedParams rp{j.at("ell").get<double>(), j.at("mu").get<double>(), j.at("eta").get<double>()};
    rp.validate();
    return rp;
}

HeunParams heun_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    HeunParams hp{j.at("ell").get<double>(), j.at("mu").get<double>(), j.at("lambda").get<double>()};
    hp.validate();
    return hp;
}

}  // namespace jos
