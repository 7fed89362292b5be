// deltawell: bound-state energies of delta potentials in 1D and 2D.

#include <iostream>

#include <CLI11.hpp>

#include "deltawell/cli.hpp"

namespace cli = deltawell::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Bound-state energies of attractive delta-function potentials"};
    app.set_version_flag("--version", cli::kToolVersion);
    app.require_subcommand(1);

    cli::Solve1DOptions s1;
    auto* solve1d = app.add_subcommand("solve1d", "five independent 1D estimators, cross-checked");
    solve1d->add_option("--hbar", s1.hbar)->capture_default_str();
    solve1d->add_option("--mass", s1.mass)->capture_default_str();
    solve1d->add_option("--alpha", s1.alpha)->capture_default_str();
    solve1d->add_option("--tol", s1.tol, "relative agreement required")->capture_default_str();
    solve1d->add_option("-o,--output", s1.output, "JSON report path (default stdout)");

    cli::Solve2DOptions s2;
    auto* solve2d = app.add_subcommand("solve2d", "continuous 2D solution and its C-spectrum");
    solve2d->add_option("--hbar", s2.hbar)->capture_default_str();
    solve2d->add_option("--mass", s2.mass)->capture_default_str();
    solve2d->add_option("--alpha", s2.alpha)->capture_default_str();
    solve2d->add_option("--R", s2.radius, "matching radius")->capture_default_str();
    solve2d->add_option("--tol", s2.tol)->capture_default_str();
    solve2d->add_option("--R-sweep", s2.radius_sweep, "radii for the E^C scaling ratios")
        ->delimiter(',');
    solve2d->add_option("-o,--output", s2.output, "JSON report path (default stdout)");

    cli::ProfileOptions pr;
    double b = 0.0;
    double r_max = 0.0;
    auto* profile = app.add_subcommand("profile", "CSV samples of the wavefunction");
    profile->add_option("--dim", pr.dim)->check(CLI::IsMember({1, 2}))->capture_default_str();
    profile->add_option("--hbar", pr.hbar)->capture_default_str();
    profile->add_option("--mass", pr.mass)->capture_default_str();
    profile->add_option("--alpha", pr.alpha)->capture_default_str();
    profile->add_option("--R", pr.radius)->capture_default_str();
    auto* b_opt = profile->add_option("--b", b, "1D decay rate (default m alpha / hbar^2)");
    auto* r_opt = profile->add_option("--r-max", r_max, "sample range (default 5R, or 5/b in 1D)");
    profile->add_option("--samples", pr.samples)->capture_default_str();
    profile->add_option("-o,--output", pr.output, "CSV path (default stdout)");

    cli::VerifyOptions vf;
    auto* verify = app.add_subcommand("verify", "self-checks of the numerical machinery");
    verify->add_option("--suite", vf.suite)
        ->check(CLI::IsMember({"bessel", "quad", "distrib", "all"}))
        ->capture_default_str();
    verify->add_option("--tol", vf.tol)->capture_default_str();
    verify->add_option("-o,--output", vf.output, "JSON report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kPass : cli::kUsageError;
    }

    try {
        if (*solve1d) return cli::cmd_solve1d(s1);
        if (*solve2d) return cli::cmd_solve2d(s2);
        if (*profile) {
            if (*b_opt) pr.b = b;
            if (*r_opt) pr.r_max = r_max;
            return cli::cmd_profile(pr);
        }
        if (*verify) return cli::cmd_verify(vf);
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kCheckFailure;
    }
    return cli::kUsageError;
}
