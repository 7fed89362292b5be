#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// Panels are bisected in order of decreasing error estimate until the summed
// estimate meets the tolerance. Results are reduced in ascending order of panel
// position, so a given input always produces the same bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltawell {

template <class F>
concept ScalarIntegrand = requires(const F& f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Raised when the panel budget is exhausted before the tolerance is met.
/// Carries the best estimate obtained.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_(best)
    {
    }
    const QuadResult& best() const noexcept { return best_; }

private:
    QuadResult best_;
};

struct QuadOptions {
    std::size_t max_panels = 5000;
};

namespace detail {

// Kronrod abscissae; odd indices are shared with the 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
};

template <ScalarIntegrand F>
Panel gauss_kronrod_15(const F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = static_cast<double>(f(center));
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = static_cast<double>(f(center - dx));
        f2[j] = static_cast<double>(f(center + dx));
        kronrod += kWgk[j] * (f1[j] + f2[j]);
        abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double hk = std::abs(half);
    asc *= hk;
    abs_sum *= hk;
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * abs_sum, err);
    }
    if (!std::isfinite(kronrod)) {
        throw std::domain_error("quadrature: integrand returned a non-finite value");
    }
    return {a, b, kronrod * half, err, abs_sum};
}

struct WorstFirst {
    bool operator()(const Panel& l, const Panel& r) const
    {
        if (l.error != r.error) return l.error < r.error;
        return l.a > r.a;
    }
};

inline std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints)
{
    std::vector<double> edges{a};
    std::vector<double> inner;
    for (double x : breakpoints) {
        if (x > a && x < b) inner.push_back(x);
    }
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    edges.insert(edges.end(), inner.begin(), inner.end());
    edges.push_back(b);
    return edges;
}

template <ScalarIntegrand F>
QuadResult adaptive(const F& f, double a, double b, double tol, std::span<const double> breakpoints,
                    const QuadOptions& options)
{
    const auto edges = panel_edges(a, b, breakpoints);
    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> queue;
    std::vector<Panel> done;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        queue.push(gauss_kronrod_15(f, edges[i], edges[i + 1]));
        evaluations += 15;
    }

    auto totals = [&]() {
        std::vector<Panel> all = done;
        auto copy = queue;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        QuadResult out{0.0, 0.0, evaluations};
        for (const auto& p : all) {
            out.value += p.value;
            out.error_estimate += p.error;
        }
        return out;
    };

    double error = 0.0;
    double abs_total = 0.0;
    {
        auto copy = queue;
        while (!copy.empty()) {
            error += copy.top().error;
            abs_total += copy.top().abs_value;
            copy.pop();
        }
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double floor = 64.0 * eps * abs_total;

    std::size_t panels = queue.size();
    while (error > std::max(tol, floor) && !queue.empty()) {
        const Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
        if (!(mid > worst.a && mid < worst.b) || worst.b - worst.a < 1e3 * eps * scale) {
            // Cannot be refined further in double precision.
            queue.pop();
            done.push_back(worst);
            continue;
        }
        if (panels >= options.max_panels) break;
        queue.pop();
        const Panel left = gauss_kronrod_15(f, worst.a, mid);
        const Panel right = gauss_kronrod_15(f, mid, worst.b);
        evaluations += 30;
        ++panels;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }

    QuadResult result = totals();
    if (result.error_estimate > std::max(tol, floor)) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not converge: error estimate %.3e exceeds tolerance %.3e",
                      result.error_estimate, tol);
        throw QuadratureError(msg, result);
    }
    return result;
}

inline void check_tolerance(double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("quadrature: tolerance must be positive");
}

}  // namespace detail

/// Integral of f over [a, b] to absolute tolerance tol. Breakpoints inside (a, b)
/// start new panels; integrable endpoint singularities are allowed since the
/// rule never samples the endpoints.
template <ScalarIntegrand F>
QuadResult integrate_finite(const F& f, double a, double b, double tol,
                            std::span<const double> breakpoints = {}, const QuadOptions& options = {})
{
    detail::check_tolerance(tol);
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("integrate_finite: requires finite a < b");
    }
    return detail::adaptive(f, a, b, tol, breakpoints, options);
}

/// Integral of f over [a, inf) through the map x = a + t / (1 - t), t in [0, 1).
template <ScalarIntegrand F>
QuadResult integrate_semiinfinite(const F& f, double a, double tol,
                                  std::span<const double> breakpoints = {},
                                  const QuadOptions& options = {})
{
    detail::check_tolerance(tol);
    if (!std::isfinite(a)) throw std::invalid_argument("integrate_semiinfinite: a must be finite");
    std::vector<double> mapped;
    for (double x : breakpoints) {
        if (x > a && std::isfinite(x)) mapped.push_back((x - a) / (1.0 + (x - a)));
    }
    auto g = [&](double t) {
        const double s = 1.0 - t;
        const double x = a + t / s;
        return static_cast<double>(f(x)) / (s * s);
    };
    return detail::adaptive(g, 0.0, 1.0, tol, mapped, options);
}

/// 2 pi int_0^inf f(r) r dr for a radially symmetric f on the plane. The caller
/// lists every radius where f or its derivative is not smooth.
template <ScalarIntegrand F>
QuadResult integrate_radial2d(const F& f, std::span<const double> breakpoints, double tol,
                              const QuadOptions& options = {})
{
    auto g = [&](double r) { return 2.0 * std::numbers::pi * static_cast<double>(f(r)) * r; };
    return integrate_semiinfinite(g, 0.0, tol, breakpoints, options);
}

}  // namespace deltawell
