#include "riskopt/lognormal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "riskopt/errors.hpp"
#include "riskopt/normal.hpp"

namespace riskopt {

namespace {

// 20-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence (no tabulated constants to mistype).
struct GaussRule {
    std::array<double, 20> node{};
    std::array<double, 20> weight{};

    GaussRule() {
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussRule& rule() {
    static const GaussRule r;
    return r;
}

double panel(const std::function<double(double)>& g, double a, double b) {
    const GaussRule& r = rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 20; ++i) acc += r.weight[i] * g(c + h * r.node[i]);
    return acc * h;
}

// Adaptive bisection: a panel is accepted when one split leaves its value
// within the share of the tolerance assigned to its width.
double adaptive(const std::function<double(double)>& g, double a, double b,
                const QuadratureConfig& cfg) {
    struct Seg {
        double a, b, whole;
    };
    const double width = b - a;
    if (!(width > 0.0)) return 0.0;

    // seed panels: split around the bulk of the Gaussian weight
    std::vector<double> cuts{a};
    for (double c : {-4.0, -2.0, 0.0, 2.0, 4.0})
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);

    std::vector<Seg> stack;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        stack.push_back({cuts[i], cuts[i + 1], panel(g, cuts[i], cuts[i + 1])});
    double total = 0.0;
    double coarse = 0.0;
    for (const Seg& s : stack) coarse += s.whole;

    int splits = static_cast<int>(stack.size());
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double left = panel(g, s.a, mid);
        const double right = panel(g, mid, s.b);
        const double err = std::abs(left + right - s.whole);
        const double share = (s.b - s.a) / width;
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(coarse)) * share;
        if (err <= tol || (s.b - s.a) < 1e-14 * width) {
            total += left + right;
            continue;
        }
        if (++splits > cfg.max_subdivisions)
            throw numerical_error("integrate_gaussian: subdivision budget exhausted "
                                  "(ill-conditioned integrand)");
        stack.push_back({s.a, mid, left});
        stack.push_back({mid, s.b, right});
    }
    return total;
}

} // namespace

double partial_power_expectation(const LognormalLaw& law, double a, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("partial_power_expectation: requires lo < hi");
    if (lo < 0.0)
        throw std::invalid_argument("partial_power_expectation: requires lo >= 0");
    if (law.degenerate()) {
        const double x = std::exp(law.m);
        return (lo <= x && x < hi) ? std::pow(x, a) : 0.0;
    }
    const double m = law.m, s = law.s;
    const double zhi = std::isinf(hi) ? hi : (std::log(hi) - m - a * s * s) / s;
    const double zlo = lo == 0.0 ? -std::numeric_limits<double>::infinity()
                                 : (std::log(lo) - m - a * s * s) / s;
    return std::exp(a * m + 0.5 * a * a * s * s) * (norm_cdf(zhi) - norm_cdf(zlo));
}

double partial_log_expectation(const LognormalLaw& law, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("partial_log_expectation: requires lo < hi");
    if (lo < 0.0)
        throw std::invalid_argument("partial_log_expectation: requires lo >= 0");
    if (law.degenerate()) {
        const double x = std::exp(law.m);
        return (lo <= x && x < hi) ? law.m : 0.0;
    }
    const double m = law.m, s = law.s;
    const double bhi = std::isinf(hi) ? hi : (std::log(hi) - m) / s;
    const double blo = lo == 0.0 ? -std::numeric_limits<double>::infinity()
                                 : (std::log(lo) - m) / s;
    const double phi_hi = std::isinf(bhi) ? 0.0 : norm_pdf(bhi);
    const double phi_lo = std::isinf(blo) ? 0.0 : norm_pdf(blo);
    return m * (norm_cdf(bhi) - norm_cdf(blo)) + s * (phi_lo - phi_hi);
}

double integrate_gaussian(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& cfg) {
    const double a = std::max(lo, -15.0);
    const double b = std::min(hi, 15.0);
    if (!(a < b)) return 0.0;
    auto g = [&f](double u) { return f(u) * norm_pdf(u); };
    return adaptive(g, a, b, cfg);
}

double integrate_gaussian(const std::function<double(double)>& f, double alpha,
                          const QuadratureConfig& cfg) {
    return integrate_gaussian(f, -std::numeric_limits<double>::infinity(), alpha, cfg);
}

double psi0(double alpha, double beta, double c1, double c2, double m, double s,
            double delta, const QuadratureConfig& cfg) {
    if (!(s > 0.0))
        throw std::invalid_argument("psi0: requires s > 0");
    if (std::isinf(alpha) && alpha < 0.0) return 0.0;
    // base(u) = c1 e^{beta u} - c2 must stay positive on (-inf, alpha]
    const double inf_base = beta > 0.0   ? -c2
                            : beta < 0.0 ? c1 * std::exp(beta * alpha) - c2
                                         : c1 - c2;
    if (!(inf_base > 0.0) && !(beta > 0.0 && c2 == 0.0 && c1 > 0.0))
        throw std::invalid_argument("psi0: base c1 e^{beta u} - c2 not positive on domain");
    auto f = [&](double v) {
        const double u = m + s * v;
        return std::pow(c1 * std::exp(beta * u) - c2, -delta);
    };
    const double vmax = std::isinf(alpha) ? alpha : (alpha - m) / s;
    return integrate_gaussian(f, vmax, cfg);
}

} // namespace riskopt
