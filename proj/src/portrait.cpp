#include "jos/portrait.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jos/bessel.hpp"
#include "jos/heun.hpp"
#include "jos/monodromy.hpp"
#include "jos/poincare.hpp"
#include "jos/rootfind.hpp"

namespace jos {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double alpha_value(FixedPointFlavor a) { return a == FixedPointFlavor::Zero ? 0.0 : kPi; }
const char* alpha_name(FixedPointFlavor a) { return a == FixedPointFlavor::Zero ? "0" : "pi"; }

double boundary_displacement(int r, FixedPointFlavor alpha, double A, double omega, double B,
                             const OdeSettings& s) {
    const ReducedParams rp = to_reduced({B, A, omega});
    const double a = alpha_value(alpha);
    return poincare_map(rp, a, s) - a - kTwoPi * r;
}

double monodromy_distance(double B, double A, double omega, const OdeSettings& s) {
    const ReducedParams rp = to_reduced({B, A, omega});
    const mat2 M = monodromy_matrix(josephson_coefficients(rp), s);
    return frobenius_norm(M - mat2::identity());
}
}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

double growth_point(int r, double omega) {
    if (r == 0) throw domain_error("growth_point: r = 0 meets the axis differently");
    if (!(omega > 0.0)) throw domain_error("growth_point: omega must be positive");
    const double v = std::sqrt(double(r) * r * omega * omega + 1.0);
    return r > 0 ? v : -v;
}

BoundaryPoint boundary_point(int r, FixedPointFlavor alpha, double A, double omega, double b_lo,
                             double b_hi, const OdeSettings& s) {
    auto d = [&](double B) { return boundary_displacement(r, alpha, A, omega, B, s); };
    const double B = brent_root(d, b_lo, b_hi, 1e-12);
    if (std::abs(d(B)) > 1e-9)
        throw numerics_error("boundary_point: displacement did not refine below 1e-9");
    return {r, alpha, A, B, omega};
}

BoundaryPoint boundary_point_auto(int r, FixedPointFlavor alpha, double A, double omega,
                                  const OdeSettings& s) {
    // The displacement is strictly increasing in B; expand around the Bessel
    // head until a sign change is found.
    const double center = r * omega - bessel_j(r, -A / omega) *
                                          (alpha == FixedPointFlavor::Zero ? 1.0 : -1.0);
    double half = 0.4;
    for (int it = 0; it < 12; ++it) {
        const double lo = center - half, hi = center + half;
        const double dlo = boundary_displacement(r, alpha, A, omega, lo, s);
        const double dhi = boundary_displacement(r, alpha, A, omega, hi, s);
        if (dlo < 0.0 && dhi > 0.0) return boundary_point(r, alpha, A, omega, lo, hi, s);
        half *= 1.8;
    }
    throw numerics_error("boundary_point_auto: no bracket found");
}

std::vector<Constriction> find_constrictions(int ell, double omega, double a_lo, double a_hi,
                                             const OdeSettings& s) {
    if (ell < 1) throw domain_error("find_constrictions: ell must be >= 1");
    if (!(omega > 0.0)) throw domain_error("find_constrictions: omega must be positive");
    if (!(a_hi > a_lo) || !(a_lo >= 0.0)) throw domain_error("find_constrictions: bad A range");

    const double B = ell * omega;
    const double step = 0.01 * std::max(1.0, omega);
    auto D = [&](double A) { return monodromy_distance(B, A, omega, s); };

    // grid scan
    std::vector<double> As, Ds;
    for (double A = std::max(a_lo + step, step); A <= a_hi + 0.5 * step; A += step) {
        As.push_back(std::min(A, a_hi));
        Ds.push_back(D(As.back()));
    }

    std::vector<Constriction> out;
    for (std::size_t i = 1; i + 1 < As.size(); ++i) {
        if (!(Ds[i] <= Ds[i - 1] && Ds[i] <= Ds[i + 1] && Ds[i] < 1e-2)) continue;
        const double A_star = golden_minimize(D, As[i - 1], As[i + 1], 1e-12);
        const double d_star = D(A_star);
        if (d_star >= 1e-7) continue;
        if (!out.empty() && std::abs(out.back().A - A_star) < 2.0 * step) continue;

        Constriction c;
        c.ell = ell;
        c.omega = omega;
        c.A = A_star;
        c.B = B;
        c.monodromy_distance = d_star;
        const ReducedParams rp = to_reduced({B, A_star, omega});
        c.residual = displacement_sup(rp, ell, uniform_theta_grid(64), s);
        if (c.residual >= 1e-6) continue;  // not a genuine identity map
        c.heun_score = entire_solution_score(to_heun(rp));
        c.type = constriction_type(c, 1e-2, s);
        out.push_back(c);
    }
    return out;
}

ConstrictionType constriction_type(const Constriction& c, double delta, const OdeSettings& s) {
    // Probe rho at (ell omega, A +/- d) for a decreasing sequence starting at
    // delta; positive needs both probes locked at ell with an interior
    // certificate (rho constant across a small B-interval).
    const double target = c.ell;
    for (double d = delta; d >= delta * 0.099; d *= 0.1) {
        bool positive = true;
        for (double sgn : {1.0, -1.0}) {
            const double A = c.A + sgn * d;
            for (double db : {-1e-4, 0.0, 1e-4}) {
                const auto r = rotation_number({c.B + db, A, c.omega}, s);
                if (std::abs(r.rho - target) > 1e-6) {
                    positive = false;
                    break;
                }
            }
            if (!positive) break;
        }
        if (positive) return ConstrictionType::Positive;
    }
    // distinguish negative (both probes outside every lock area => non-integer
    // rho nearby) from undecided
    int outside = 0;
    for (double sgn : {1.0, -1.0}) {
        const auto r = rotation_number({c.B, c.A + sgn * delta * 0.1, c.omega}, s);
        if (std::abs(r.rho - std::round(r.rho)) > 1e-6) ++outside;
    }
    return outside == 2 ? ConstrictionType::Negative : ConstrictionType::Neutral;
}

std::pair<double, double> off_axis_constriction_search(const Constriction& c, double seed_offset,
                                                       const OdeSettings& s) {
    auto f = [&](double B, double A) { return monodromy_distance(B, A, c.omega, s); };
    auto [B1, A1] = nelder_mead_2d(f, c.B + seed_offset, c.A + seed_offset, 0.05, 1e-13);
    // polish with a second, tighter simplex
    auto [B2, A2] = nelder_mead_2d(f, B1, A1, 1e-4, 1e-14);
    return {B2, A2};
}

GhostScanReport ghost_scan(int ell, double omega, double a_hi, const OdeSettings& s) {
    GhostScanReport rep;
    rep.constrictions = find_constrictions(ell, omega, 0.0, a_hi, s);
    char buf[256];
    for (const auto& c : rep.constrictions) {
        ++rep.checked;
        const auto r = rotation_number({c.B, c.A, c.omega}, s);
        if (std::abs(r.rho - ell) > 1e-6) {
            std::snprintf(buf, sizeof buf, "constriction at A=%.12g has rho=%.12g != ell=%d", c.A,
                          r.rho, ell);
            rep.violations.emplace_back(buf);
        }
        if (c.type != ConstrictionType::Positive) {
            std::snprintf(buf, sizeof buf, "constriction at A=%.12g is not positive", c.A);
            rep.violations.emplace_back(buf);
        }
    }
    return rep;
}

std::pair<double, double> asymptotic_error(int r, double omega, double A, const OdeSettings& s) {
    const double j = bessel_j(r, -A / omega);
    const BoundaryPoint p0 = boundary_point_auto(r, FixedPointFlavor::Zero, A, omega, s);
    const BoundaryPoint ppi = boundary_point_auto(r, FixedPointFlavor::Pi, A, omega, s);
    const double e0 = std::abs(p0.B - r * omega + j);
    const double epi = std::abs(ppi.B - r * omega - j);
    return {e0, epi};
}

// ------------------------------------------------------------------
// Portrait assembly and export
// ------------------------------------------------------------------

Portrait trace_portrait(const PortraitConfig& cfg) {
    if (!(cfg.omega > 0.0)) throw domain_error("trace_portrait: omega must be positive");
    Portrait p;
    p.config = cfg;

    for (int r = -cfg.r_max; r <= cfg.r_max; ++r)
        if (r != 0) p.growth_points.push_back({r, growth_point(r, cfg.omega)});

    // boundary curves, computed index-parallel and assembled in order
    struct Task {
        int r;
        FixedPointFlavor alpha;
    };
    std::vector<Task> tasks;
    for (int r = -cfg.r_max; r <= cfg.r_max; ++r)
        for (auto a : {FixedPointFlavor::Zero, FixedPointFlavor::Pi}) tasks.push_back({r, a});

    p.curves.resize(tasks.size());
    const int na = cfg.samples_per_curve;
    parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int ti) {
        const Task t = tasks[static_cast<std::size_t>(ti)];
        BoundaryCurve curve;
        curve.r = t.r;
        curve.alpha = t.alpha;
        for (int i = 1; i <= na; ++i) {
            const double A = cfg.a_max * i / na;
            try {
                curve.points.push_back(boundary_point_auto(t.r, t.alpha, A, cfg.omega, cfg.ode));
            } catch (const numerics_error&) {
                // skip points where no bracket was found
            }
        }
        p.curves[static_cast<std::size_t>(ti)] = std::move(curve);
    });

    // constrictions on the axes 1..ell_max
    for (int ell = 1; ell <= cfg.constriction_ell_max; ++ell) {
        const auto cs = find_constrictions(ell, cfg.omega, 0.0, cfg.a_max, cfg.ode);
        p.constrictions.insert(p.constrictions.end(), cs.begin(), cs.end());
    }
    std::sort(p.constrictions.begin(), p.constrictions.end(),
              [](const Constriction& a, const Constriction& b) {
                  return a.ell != b.ell ? a.ell < b.ell : a.A < b.A;
              });
    return p;
}

static const char* type_name(ConstrictionType t) {
    switch (t) {
        case ConstrictionType::Positive: return "positive";
        case ConstrictionType::Negative: return "negative";
        default: return "neutral";
    }
}

std::string portrait_json(const Portrait& p) {
    nlohmann::ordered_json j;
    j["schema"] = "portrait-v1";
    j["metadata"] = {{"generator", "jjlock"},
                     {"version", "1.0.0"},
                     {"seed", p.config.seed},
                     {"rel_tol", p.config.ode.rel_tol},
                     {"abs_tol", p.config.ode.abs_tol}};
    j["omega"] = p.config.omega;
    j["r_max"] = p.config.r_max;
    j["a_max"] = p.config.a_max;
    j["samples_per_curve"] = p.config.samples_per_curve;
    j["growth_points"] = nlohmann::ordered_json::array();
    for (const auto& g : p.growth_points) j["growth_points"].push_back({{"r", g.r}, {"B", g.B}});
    j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : p.curves) {
        nlohmann::ordered_json jc;
        jc["r"] = c.r;
        jc["alpha"] = alpha_name(c.alpha);
        jc["points"] = nlohmann::ordered_json::array();
        for (const auto& q : c.points) jc["points"].push_back({{"A", q.A}, {"B", q.B}});
        j["curves"].push_back(std::move(jc));
    }
    j["constrictions"] = nlohmann::ordered_json::array();
    for (const auto& c : p.constrictions)
        j["constrictions"].push_back({{"ell", c.ell},
                                      {"A", c.A},
                                      {"B", c.B},
                                      {"residual", c.residual},
                                      {"monodromy_distance", c.monodromy_distance},
                                      {"heun_score", c.heun_score},
                                      {"type", type_name(c.type)}});
    return j.dump(1) + "\n";
}

std::string portrait_csv(const Portrait& p) {
    std::ostringstream os;
    os << "# schema: portrait-v1\n";
    os << "# omega: " << p.config.omega << "\n";
    os << "r,alpha,A,B\n";
    char line[160];
    for (const auto& c : p.curves)
        for (const auto& q : c.points) {
            std::snprintf(line, sizeof line, "%d,%s,%.17g,%.17g\n", q.r, alpha_name(q.alpha), q.A,
                          q.B);
            os << line;
        }
    return os.str();
}

std::string portrait_svg(const Portrait& p) {
    const double bmax = p.config.r_max * p.config.omega + 2.0;
    const double amax = p.config.a_max;
    auto px = [&](double B) { return 500.0 + 480.0 * B / bmax; };
    auto py = [&](double A) { return 500.0 - 480.0 * A / amax; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    os << "<!-- phase-lock portrait, omega=" << p.config.omega
       << "; B horizontal, A vertical -->\n";
    os << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    os << "<line x1=\"0\" y1=\"500\" x2=\"1000\" y2=\"500\" stroke=\"#999\"/>\n";
    os << "<line x1=\"500\" y1=\"0\" x2=\"500\" y2=\"1000\" stroke=\"#999\"/>\n";
    char buf[160];
    for (const auto& c : p.curves) {
        for (double mirror : {1.0, -1.0}) {  // areas are symmetric in A
            os << "<polyline fill=\"none\" stroke=\""
               << (c.alpha == FixedPointFlavor::Zero ? "#1f77b4" : "#d62728")
               << "\" stroke-width=\"1\" points=\"";
            for (const auto& q : c.points) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(q.B), py(mirror * q.A));
                os << buf;
            }
            os << "\"/>\n";
        }
    }
    for (const auto& g : p.growth_points) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"black\"/>\n", px(g.B),
                      py(0.0));
        os << buf;
    }
    for (const auto& c : p.constrictions) {
        for (double mirror : {1.0, -1.0}) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"green\"/>\n", px(c.B),
                          py(mirror * c.A));
            os << buf;
        }
    }
    os << "</svg>\n";
    return os.str();
}

void export_portrait(const Portrait& p, const std::string& format, const std::string& path) {
    std::string payload;
    if (format == "json")
        payload = portrait_json(p);
    else if (format == "csv")
        payload = portrait_csv(p);
    else if (format == "svg")
        payload = portrait_svg(p);
    else
        throw domain_error("export_portrait: unknown format " + format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_portrait: cannot open " + path);
    out << payload;
    if (!out) throw std::runtime_error("export_portrait: write failed for " + path);
}

}  // namespace jos
