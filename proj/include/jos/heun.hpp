#ifndef JOS_HEUN_HPP
#define JOS_HEUN_HPP

// Power-series machinery for the double confluent Heun equation associated
// with the torus flow,
//   z^2 E'' + ((ell+1) z + mu (1 - z^2)) E' + (lambda - mu (ell+1) z) E = 0,
// and its conjugate (ell -> -ell): entire-solution detection, the tridiagonal
// polynomial-solution determinant and the spectral curve scan.

#include <string>
#include <vector>

#include "jos/mat2.hpp"
#include "jos/params.hpp"

namespace jos {

enum class HeunEquation { Direct, Conjugate };

// Truncated power-series solution a_0..a_N (a_0 = 1) generated by the
// three-term recurrence
//   mu (k+1) a_{k+1} + (k (k + ell') + lambda) a_k - mu (k + ell') a_{k-1} = 0,
// where ell' = ell for the direct equation and -ell for the conjugate one.
struct HeunSeries {
    std::vector<cplx> coeffs;
    HeunEquation equation = HeunEquation::Direct;
    HeunParams params;
    // max term-wise defect of the recurrence, relative to the term scale
    double recurrence_residual = 0.0;
    // certification of the derivation: the differential-equation residual of
    // the truncation must match its predicted boundary form at sample points
    double certification_residual = 0.0;

    // E(z), E'(z), E''(z) of the truncated series
    cplx eval(cplx z, int derivative = 0) const;
    // value of the differential operator applied to the truncation at z
    cplx ode_residual(cplx z) const;
    // the exact boundary value the residual must take when the recurrence is
    // satisfied: -mu (N+1) a_{N+1} z^N - mu (N + ell' + 1) a_N z^{N+1}
    cplx predicted_boundary_residual(cplx z) const;
};

// Requires mu != 0.  Certifies the recurrence at 20 sample points |z| <= 0.5.
HeunSeries heun_series(const HeunParams& hp, int n_terms,
                       HeunEquation eq = HeunEquation::Direct);

// Growth indicator for the series of the direct equation: well below 1 when
// the coefficients follow the entire (minimal) solution mu^k/k!, and >= 1
// when the dominant k!/mu^k component is present.  The number of terms is
// chosen adaptively from mu unless n_terms > 0 is given.
double entire_solution_score(const HeunParams& hp, int n_terms = 0);

// Calibrated classification thresholds for the score.
struct EntireScoreBands {
    static constexpr double entire_below = 0.25;
    static constexpr double threshold = 0.5;
    static constexpr double not_entire_above = 0.75;
};

// Determinant of the ell x ell tridiagonal system expressing that the
// conjugate equation has a polynomial solution of degree <= ell-1:
//   rows k = 0..ell-1:  diag k(k-ell)+lambda, super mu (k+1), sub mu (ell-k).
// Evaluated by the continuant recurrence; a polynomial of degree ell in
// (lambda, mu^2).
double conjugate_poly_determinant(int ell, double lambda, double mu);

struct SpectralSample {
    int ell = 0;
    double omega = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
    double det_value = 0.0;
    double A = 0.0;  // = 2 omega mu
};

// All roots mu in (0, mu_max] of the determinant along lambda = 1/(4 omega^2) - mu^2,
// by sign-change bracketing on a grid plus bisection, ascending in mu.
std::vector<SpectralSample> spectral_scan(int ell, double omega, double mu_max);

// CSV with columns ell, omega, mu, lambda, A.
std::string spectral_csv(const std::vector<SpectralSample>& samples);

}  // namespace jos

#endif
