#include "riskopt/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "riskopt/prehorizon.hpp"
#include "riskopt/solver.hpp"
#include "riskopt/utility.hpp"

namespace riskopt {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::int64_t kChunk = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64(splitmix64(seed + kGolden * (chunk + 1)));
}

struct Accum {
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
    }
    void merge(const Accum& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
};

// Runs fn(chunk_index, chunk_size) over all chunks on a small thread pool;
// partial results land in a per-chunk slot so the reduction order is fixed.
template <typename ChunkFn>
void run_chunks(std::int64_t total, std::int64_t chunk_len, ChunkFn fn) {
    const std::int64_t n_chunks = (total + chunk_len - 1) / chunk_len;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::int64_t>(hw, std::max<std::int64_t>(1, n_chunks)));
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::int64_t len = std::min(chunk_len, total - c * chunk_len);
            fn(c, len);
        }
    };
    if (n_threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
}

double eval_functional(const Functional& fn, const TerminalProfile& p, double h, double xi) {
    switch (fn.kind) {
        case Functional::Kind::Budget: return h * xi;
        case Functional::Kind::Mean: return xi;
        case Functional::Kind::Interval: return (xi > fn.lo && xi < fn.hi) ? 1.0 : 0.0;
        case Functional::Kind::L1: return xi <= fn.q2 ? fn.q2 - xi : 0.0;
        case Functional::Kind::L2: return xi <= fn.q2 ? h * (fn.q2 - xi) : 0.0;
        case Functional::Kind::Constraint:
            switch (p.kind) {
                case ConstraintKind::VaR: return xi < p.q ? 1.0 : 0.0;
                case ConstraintKind::EL: return xi < p.q ? p.q - xi : 0.0;
                case ConstraintKind::EUL: {
                    if (xi >= p.q) return 0.0;
                    const UtilitySpec u{p.gamma};
                    return u.u(p.q) - u.u(xi);
                }
                default:
                    throw std::invalid_argument(
                        "mc_static: constraint functional needs a VaR/EL/EUL profile");
            }
    }
    throw std::invalid_argument("mc_static: unknown functional");
}

} // namespace

MCReport& MCReport::against(double closed_form) {
    target = closed_form;
    z_score = std_error > 0.0 ? (estimate - closed_form) / std_error : 0.0;
    return *this;
}

std::vector<MCReport> mc_static(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const std::vector<Functional>& fns, const MCConfig& cfg) {
    if (cfg.n_samples < 2) throw std::invalid_argument("mc_static: n_samples must be >= 2");
    const LognormalLaw law = state_price_law(mkt, T);
    const std::size_t nf = fns.size();

    // antithetic mode averages each +z/-z pair into one observation
    const std::int64_t n_obs = cfg.antithetic ? cfg.n_samples / 2 : cfg.n_samples;
    const std::int64_t n_chunks = (n_obs + kChunk - 1) / kChunk;
    std::vector<std::vector<Accum>> partial(n_chunks, std::vector<Accum>(nf));

    run_chunks(n_obs, kChunk, [&](std::int64_t c, std::int64_t len) {
        std::mt19937_64 eng = chunk_engine(cfg.seed, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Accum>& acc = partial[c];
        for (std::int64_t i = 0; i < len; ++i) {
            const double z = normal(eng);
            const double h1 = std::exp(law.m + law.s * z);
            const double xi1 = p.value(h1);
            if (cfg.antithetic) {
                const double h2 = std::exp(law.m - law.s * z);
                const double xi2 = p.value(h2);
                for (std::size_t k = 0; k < nf; ++k)
                    acc[k].add(0.5 * (eval_functional(fns[k], p, h1, xi1) +
                                      eval_functional(fns[k], p, h2, xi2)));
            } else {
                for (std::size_t k = 0; k < nf; ++k)
                    acc[k].add(eval_functional(fns[k], p, h1, xi1));
            }
        }
    });

    std::vector<MCReport> out(nf);
    for (std::size_t k = 0; k < nf; ++k) {
        Accum total;
        for (std::int64_t c = 0; c < n_chunks; ++c) total.merge(partial[c][k]);
        const double n = static_cast<double>(n_obs);
        const double mean = total.sum / n;
        const double var = std::max(0.0, total.sum_sq / n - mean * mean);
        out[k].estimate = mean;
        out[k].std_error = std::sqrt(var / n);
        out[k].n = cfg.n_samples;
    }
    return out;
}

MCReport mc_static(const TerminalProfile& p, const MarketParams& mkt, double T,
                   const Functional& fn, const MCConfig& cfg) {
    return mc_static(p, mkt, T, std::vector<Functional>{fn}, cfg).front();
}

MCReport mc_conditional_wealth(const TerminalProfile& p, const MarketParams& mkt, double T,
                               double t, double z, const MCConfig& cfg) {
    if (!(t >= 0.0 && t < T))
        throw std::invalid_argument("mc_conditional_wealth: requires 0 <= t < T");
    if (!(z > 0.0)) throw std::invalid_argument("mc_conditional_wealth: z must be > 0");
    const double tau = T - t;
    const double a = -(mkt.r + 0.5 * mkt.kappa * mkt.kappa) * tau;
    const double sq = mkt.kappa * std::sqrt(tau);

    const std::int64_t n_obs = cfg.antithetic ? cfg.n_samples / 2 : cfg.n_samples;
    const std::int64_t n_chunks = (n_obs + kChunk - 1) / kChunk;
    std::vector<Accum> partial(n_chunks);

    run_chunks(n_obs, kChunk, [&](std::int64_t c, std::int64_t len) {
        std::mt19937_64 eng = chunk_engine(cfg.seed, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> normal(0.0, 1.0);
        Accum& acc = partial[c];
        for (std::int64_t i = 0; i < len; ++i) {
            const double u = normal(eng);
            const double r1 = std::exp(a + sq * u);
            double v = r1 * p.value(z * r1);
            if (cfg.antithetic) {
                const double r2 = std::exp(a - sq * u);
                v = 0.5 * (v + r2 * p.value(z * r2));
            }
            acc.add(v);
        }
    });

    Accum total;
    for (const Accum& pa : partial) total.merge(pa);
    const double n = static_cast<double>(n_obs);
    const double mean = total.sum / n;
    const double var = std::max(0.0, total.sum_sq / n - mean * mean);
    MCReport rep;
    rep.estimate = mean;
    rep.std_error = std::sqrt(var / n);
    rep.n = cfg.n_samples;
    return rep;
}

MCReport replicate(const TerminalProfile& p, const MarketParams& mkt, double T,
                   const MCConfig& cfg, const QuadratureConfig& qcfg) {
    if (cfg.n_steps < 1) throw std::invalid_argument("replicate: n_steps must be >= 1");
    const double x0 = budget_value(p, mkt, T, qcfg);
    const double dt = T / cfg.n_steps;
    const double drift = (mkt.mu - 0.5 * mkt.sigma * mkt.sigma) * dt;
    const double vol = mkt.sigma * std::sqrt(dt);
    const double bond_growth = std::exp(mkt.r * dt);

    constexpr std::int64_t kPathChunk = 128;
    const std::int64_t n_chunks = (cfg.n_samples + kPathChunk - 1) / kPathChunk;
    std::vector<Accum> partial(n_chunks);

    run_chunks(cfg.n_samples, kPathChunk, [&](std::int64_t c, std::int64_t len) {
        std::mt19937_64 eng = chunk_engine(cfg.seed, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> normal(0.0, 1.0);
        Accum& acc = partial[c];
        for (std::int64_t i = 0; i < len; ++i) {
            double ln_s = 0.0;
            double wealth = x0;
            for (int k = 0; k < cfg.n_steps; ++k) {
                const double t = k * dt;
                const double h = h_from_stock(mkt, t, std::exp(ln_s));
                const double frac =
                    wealth_and_fraction(p, mkt, T, t, h, qcfg).fraction;
                const double step = drift + vol * normal(eng);
                wealth *= frac * std::exp(step) + (1.0 - frac) * bond_growth;
                ln_s += step;
            }
            const double h_T = h_from_stock(mkt, T, std::exp(ln_s));
            const double xi = p.value(h_T);
            const double rel = (wealth - xi) / xi;
            acc.add(rel * rel);
        }
    });

    Accum total;
    for (const Accum& pa : partial) total.merge(pa);
    const double n = static_cast<double>(cfg.n_samples);
    const double mean_sq = total.sum / n;
    const double var_sq = std::max(0.0, total.sum_sq / n - mean_sq * mean_sq);
    const double rms = std::sqrt(std::max(0.0, mean_sq));
    MCReport rep;
    rep.estimate = rms;
    // delta method: se(rms) = se(mean of rel^2) / (2 rms)
    rep.std_error = rms > 0.0 ? std::sqrt(var_sq / n) / (2.0 * rms) : 0.0;
    rep.n = cfg.n_samples;
    return rep;
}

} // namespace riskopt
