#pragma once

// Command implementations behind the `deltawell` executable. Each command
// returns an exit code and writes a JSON report (or CSV profile); argument
// parsing lives in tools/deltawell.cpp.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deltawell/verify.hpp"
#include "deltawell/well1d.hpp"
#include "deltawell/well2d.hpp"

namespace deltawell::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

/// Bad flags or an unusable output path.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kJumpConventionWarning =
    "jump convention: the derivative jump of psi_c across r = R computed from I0' = I1 and "
    "K0' = -K1 is N b (-K1(u0) - I1(u0)); the closed-form C-spectrum energy E^C is built on "
    "N b (K1(u0) - I1(u0)) instead. Both are reported; the bracket reproduces E^C only under "
    "the second combination.";

inline constexpr const char* kNegativeAlphaWarning =
    "alpha < 0: the potential is repulsive, and the bound-state reading of psi_c assumes "
    "alpha > 0. Results are reported as computed.";

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Doubles are written with 17 significant digits; non-finite values become null.
inline nlohmann::ordered_json number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return nlohmann::ordered_json::parse(buf);
}

class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    void input(const std::string& key, double v) { inputs_[key] = number(v); }
    void input(const std::string& key, const std::string& v) { inputs_[key] = v; }
    void input(const std::string& key, const std::vector<double>& v)
    {
        auto arr = nlohmann::ordered_json::array();
        for (double x : v) arr.push_back(number(x));
        inputs_[key] = std::move(arr);
    }

    void result(const std::string& name, double value, const std::string& method, double tolerance,
                bool pass)
    {
        results_.push_back({{"name", name},
                            {"value", number(value)},
                            {"method", method},
                            {"tolerance", number(tolerance)},
                            {"pass", pass}});
        all_pass_ = all_pass_ && pass;
    }
    void result(const CheckResult& c) { result(c.name, c.value, c.method, c.tolerance, c.pass); }

    /// A check that could not be carried out at all.
    void failure(const std::string& name, const std::string& method, const std::string& message)
    {
        results_.push_back({{"name", name},
                            {"value", nullptr},
                            {"method", method},
                            {"tolerance", nullptr},
                            {"pass", false},
                            {"error", message}});
        all_pass_ = false;
    }

    void warn(std::string w) { warnings_.push_back(std::move(w)); }

    bool all_pass() const noexcept { return all_pass_; }

    nlohmann::ordered_json to_json(const std::string& timestamp) const
    {
        nlohmann::ordered_json j;
        j["tool_version"] = kToolVersion;
        j["command"] = command_;
        j["timestamp"] = timestamp;
        j["inputs"] = inputs_;
        j["results"] = results_;
        j["warnings"] = warnings_;
        j["all_pass"] = all_pass_;
        return j;
    }

private:
    std::string command_;
    nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
    nlohmann::ordered_json results_ = nlohmann::ordered_json::array();
    std::vector<std::string> warnings_;
    bool all_pass_ = true;
};

/// Writes to `path`, or to `out` when path is empty or "-".
inline void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open output path: " + path);
    f << text;
    f.flush();
    if (!f) throw UsageError("failed writing output path: " + path);
}

inline int finish(const Report& r, const std::string& path, std::ostream& out)
{
    emit(r.to_json(utc_timestamp()).dump(2) + "\n", path, out);
    return r.all_pass() ? kPass : kCheckFailure;
}

// ---------------------------------------------------------------------------

struct Solve1DOptions {
    double hbar = 1.0;
    double mass = 1.0;
    double alpha = 1.0;
    double tol = 1e-8;
    std::string output;
};

inline int cmd_solve1d(const Solve1DOptions& o, std::ostream& out = std::cout)
{
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    std::optional<Params1D> p;
    try {
        p.emplace(o.hbar, o.mass, o.alpha);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    Report r("solve1d");
    r.input("hbar", o.hbar);
    r.input("mass", o.mass);
    r.input("alpha", o.alpha);
    r.input("tol", o.tol);

    const double exact = energy_closed_form(*p).energy;
    const double inner_tol = std::min(o.tol, 1e-10);
    std::vector<double> energies;
    for (Method m : kAllMethods) {
        const std::string name(to_string(m));
        try {
            EnergyReport e;
            switch (m) {
                case Method::closed_form: e = energy_closed_form(*p); break;
                case Method::integration: e = energy_integration(*p, inner_tol); break;
                case Method::distributional: e = energy_distributional(*p, inner_tol); break;
                case Method::quadratic_form: e = energy_quadratic_form(*p); break;
                case Method::resolvent_pole: e = energy_resolvent_pole(*p, inner_tol); break;
            }
            const double rel = std::abs(e.energy - exact) / std::abs(exact);
            r.result("energy." + name, e.energy, name, o.tol, rel <= o.tol);
            energies.push_back(e.energy);
        } catch (const std::exception& ex) {
            r.failure("energy." + name, name, ex.what());
        }
    }
    if (energies.size() == kAllMethods.size()) {
        const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
        const double spread = (*hi - *lo) / std::abs(exact);
        r.result("cross_method_spread", spread, "max-min over methods", o.tol, spread <= o.tol);
    }
    return finish(r, o.output, out);
}

// ---------------------------------------------------------------------------

struct Solve2DOptions {
    double hbar = 1.0;
    double mass = 1.0;
    double alpha = 1.0;
    double radius = 1.0;
    double tol = 1e-8;
    std::vector<double> radius_sweep;
    std::string output;
};

inline constexpr double kHelmholtzTolerance = 1e-6;
inline constexpr double kU0Tolerance = 1e-15;  // bracket width used by u0()
inline constexpr double kCrossingResidual = 1e-11;

inline int cmd_solve2d(const Solve2DOptions& o, std::ostream& out = std::cout)
{
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    std::optional<Params2D> p;
    try {
        p.emplace(o.hbar, o.mass, o.alpha, o.radius);
        for (double rr : o.radius_sweep) Params2D(o.hbar, o.mass, o.alpha, rr);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    Report r("solve2d");
    r.input("hbar", o.hbar);
    r.input("mass", o.mass);
    r.input("alpha", o.alpha);
    r.input("R", o.radius);
    r.input("tol", o.tol);
    if (!o.radius_sweep.empty()) r.input("R_sweep", o.radius_sweep);
    r.warn(kJumpConventionWarning);
    if (o.alpha < 0.0) r.warn(kNegativeAlphaWarning);

    const double u = u0();
    const double mismatch = bessel_i(kOrder0, u) - bessel_k(kOrder0, u);
    r.result("u0", u, "crossing_u0", kU0Tolerance, std::abs(mismatch) <= kCrossingResidual);
    r.result("u0_residual", mismatch, "I0(u0) - K0(u0)", kCrossingResidual,
             std::abs(mismatch) <= kCrossingResidual);
    r.result("beta_sq", beta_sq(u), "K1(u0)^2 - I1(u0)^2", kU0Tolerance, beta_sq(u) > 0.0);
    r.result("b", p->b(), "u0 / R", kU0Tolerance, true);

    try {
        const double n = norm_check(*p, std::min(o.tol, 1e-12));
        r.result("normalization", n, "integrate_radial2d", o.tol, std::abs(n - 1.0) <= o.tol);
    } catch (const std::exception& ex) {
        r.failure("normalization", "integrate_radial2d", ex.what());
    }

    const auto radii = helmholtz_sample_radii(o.radius);
    double worst = 0.0;
    for (double res : helmholtz_residual(*p, radii)) worst = std::max(worst, std::abs(res));
    r.result("helmholtz_residual_max", worst, "central differences", kHelmholtzTolerance,
             worst <= kHelmholtzTolerance);

    const auto jumps = jump_weight(*p);
    const double jump_gap = std::abs(jumps.analytic - jumps.finite_difference) / std::abs(jumps.analytic);
    r.result("jump.derived", jumps.analytic, "N b (-K1 - I1)", detail::kJumpAgreement, jump_gap <= detail::kJumpAgreement);
    r.result("jump.finite_difference", jumps.finite_difference, "one-sided differences",
             detail::kJumpAgreement, jump_gap <= detail::kJumpAgreement);
    r.result("jump.paper_combination", jumps.paper_combination, "N b (K1 - I1)", detail::kJumpAgreement,
             true);

    const double ec = c_spectrum_paper(*p);
    r.result("energy.c_spectrum_paper", ec, "closed form", o.tol, std::isfinite(ec));
    try {
        const auto family = default_c_spectrum_family(o.radius);
        const auto [derived, paper] =
            c_spectrum_bracket_both(*p, p->alpha(), family);
        const double spread_tol = std::max(o.tol, 1e-8);
        r.result("energy.bracket_derived", derived.has_solution ? derived.energy : 0.0,
                 "c_spectrum_bracket/derived", spread_tol,
                 derived.has_solution && derived.family_spread <= spread_tol);
        r.result("energy.bracket_paper", paper.has_solution ? paper.energy : 0.0,
                 "c_spectrum_bracket/paper", spread_tol,
                 paper.has_solution && paper.family_spread <= spread_tol);
        if (paper.has_solution) {
            const double agree = std::abs(paper.energy - ec) / std::abs(ec);
            r.result("bracket_paper_vs_formula", agree, "relative difference", o.tol, agree <= o.tol);
        }
        if (derived.has_solution && paper.has_solution) {
            const double k1 = bessel_k(kOrder1, u);
            const double i1 = bessel_i(kOrder1, u);
            const double expected = std::pow((k1 - i1) / (k1 + i1), 2);
            const double ratio = derived.energy / paper.energy;
            r.result("bracket_derived_over_paper", ratio, "ratio vs ((K1 - I1) / (K1 + I1))^2",
                     o.tol, std::abs(ratio - expected) <= o.tol * expected);
        }
    } catch (const std::exception& ex) {
        r.failure("energy.bracket", "c_spectrum_bracket", ex.what());
    }

    if (!o.radius_sweep.empty()) {
        const double first = c_spectrum_paper(Params2D(o.hbar, o.mass, o.alpha, o.radius_sweep.front()));
        for (double rr : o.radius_sweep) {
            const double e = c_spectrum_paper(Params2D(o.hbar, o.mass, o.alpha, rr));
            const double ratio = e / first;
            const double expected = (o.radius_sweep.front() / rr) * (o.radius_sweep.front() / rr);
            char name[64];
            std::snprintf(name, sizeof name, "sweep.R=%.17g.ratio", rr);
            r.result(name, ratio, "E^C(R) / E^C(R_first)", 1e-12,
                     std::abs(ratio - expected) <= 1e-12 * expected);
        }
    }
    return finish(r, o.output, out);
}

// ---------------------------------------------------------------------------

struct ProfileOptions {
    int dim = 2;
    double hbar = 1.0;
    double mass = 1.0;
    double alpha = 1.0;
    double radius = 1.0;
    std::optional<double> b;  ///< 1D only; defaults to m alpha / hbar^2
    std::optional<double> r_max;
    int samples = 1000;
    std::string output;
};

inline int cmd_profile(const ProfileOptions& o, std::ostream& out = std::cout)
{
    if (o.samples < 2) throw UsageError("--samples must be at least 2");
    if (o.dim != 1 && o.dim != 2) throw UsageError("--dim must be 1 or 2");
    if (o.r_max && !(*o.r_max > 0.0)) throw UsageError("--r-max must be positive");

    std::string csv;
    char line[128];
    try {
        if (o.dim == 1) {
            double b = 0.0;
            if (o.b) {
                if (!(*o.b > 0.0)) throw UsageError("--b must be positive");
                b = *o.b;
            } else {
                const Params1D p(o.hbar, o.mass, o.alpha);
                b = p.mass() * p.alpha() / (p.hbar() * p.hbar());
            }
            const double x_max = o.r_max.value_or(5.0 / b);
            csv = "x,psi,psi_sq\n";
            for (int i = 0; i < o.samples; ++i) {
                const double x = -x_max + 2.0 * x_max * i / (o.samples - 1);
                const double v = psi_1d(b, x);
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", x, v, v * v);
                csv += line;
            }
        } else {
            const Params2D p(o.hbar, o.mass, o.alpha, o.radius);
            const auto psi = make_psi2d(p);
            const double r_max = o.r_max.value_or(5.0 * o.radius);
            csv = "r,psi,psi_sq\n";
            for (int i = 0; i < o.samples; ++i) {
                const double r = r_max * i / (o.samples - 1);
                const double v = psi.representation(r);
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r, v, v * v);
                csv += line;
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(csv, o.output, out);
    return kPass;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string suite = "all";
    double tol = 1e-8;
    std::string output;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out = std::cout)
{
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    const bool all = o.suite == "all";
    if (!all && o.suite != "bessel" && o.suite != "quad" && o.suite != "distrib") {
        throw UsageError("--suite must be one of bessel, quad, distrib, all");
    }
    Report r("verify");
    r.input("suite", o.suite);
    r.input("tol", o.tol);

    auto run = [&](const char* name, auto&& suite) {
        try {
            for (const auto& c : suite()) r.result(c);
        } catch (const std::exception& ex) {
            r.failure(name, "verify", ex.what());
        }
    };
    if (all || o.suite == "bessel") run("bessel", [] { return verify_bessel(); });
    if (all || o.suite == "quad") run("quad", [&] { return verify_quad(std::min(o.tol, 1e-10)); });
    if (all || o.suite == "distrib") run("distrib", [&] { return verify_distrib(o.tol); });
    return finish(r, o.output, out);
}

}  // namespace deltawell::cli
