#include "hdla/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hdla::theory {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836; // ln(2*pi)

double lgamma_int(std::int64_t m) { return std::lgamma(static_cast<double>(m)); }

} // namespace

LogScalar log_binom(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return LogScalar::zero();
    return LogScalar::from_log(lgamma_int(n + 1) - lgamma_int(k + 1) - lgamma_int(n - k + 1));
}

LogScalar binom_of_log(LogScalar mu, int m) {
    if (m < 0) return LogScalar::zero();
    if (m == 0) return LogScalar::from_log(0.0);
    if (mu.is_zero()) return LogScalar::zero();
    const double log_mu = mu.log_value();
    const double inv = std::exp(-log_mu);
    double sum = -lgamma_int(m + 1);
    for (int i = 0; i < m; ++i) {
        const double frac = static_cast<double>(i) * inv;
        if (frac >= 1.0) return LogScalar::zero(); // mu <= i: binomial vanishes
        sum += log_mu + std::log1p(-frac);
    }
    return LogScalar::from_log(sum);
}

LogScalar binom_approx(double m, std::int64_t s) {
    if (s < 0) return LogScalar::zero();
    if (s == 0) return LogScalar::from_log(0.0);
    if (m <= 0) throw std::invalid_argument("binom_approx requires m > 0");
    const double s3 = static_cast<double>(s) * s * s;
    if (s3 > m * m)
        throw std::invalid_argument("binom_approx guard s^3 <= m^2 violated");
    const double sd = static_cast<double>(s);
    return LogScalar::from_log(sd * std::log(m) - lgamma_int(s + 1) - sd * sd / (2.0 * m));
}

TauResult tau_k_eps(std::int64_t n, std::int64_t k, double eps) {
    if (k < 0 || k >= n) throw std::invalid_argument("tau_k_eps requires 0 <= k < n");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    TauResult r;
    r.tau = (eps / 4.0) * log_binom(n, k + 1).value();
    r.omega = (eps / 4.0) * static_cast<double>(n - k) / static_cast<double>(k + 1);
    return r;
}

LogScalar eta(std::int64_t n, std::int64_t ell, std::int64_t j, EtaMode mode) {
    if (j < 0 || j > ell + 1)
        throw std::invalid_argument("eta requires 0 <= j <= ell+1");
    if (mode == EtaMode::exact) {
        double sum = 0;
        for (std::int64_t s = 0; s < j; ++s) {
            const LogScalar f = log_binom(n, ell - s);
            if (f.is_zero()) return LogScalar::zero();
            sum += f.log_value();
        }
        return LogScalar::from_log(sum);
    }
    // validity regime of the closed-form estimate
    if (static_cast<double>(ell) > std::pow(static_cast<double>(n), 0.49))
        throw std::invalid_argument("eta asymptotic mode requires ell <= n^0.49");
    if (static_cast<double>(j) > std::pow(static_cast<double>(ell), 0.6))
        throw std::invalid_argument("eta asymptotic mode requires j <= ell^0.6");
    const double nd = static_cast<double>(n), ld = static_cast<double>(ell),
                 jd = static_cast<double>(j);
    const double eps_a = jd / (2.0 * ld);
    const double eps_b = jd / (6.0 * ld) + jd * jd / (24.0 * ld * ld);
    const double log_nl = std::log(nd) - std::log(ld);
    return LogScalar::from_log(jd * (ld - (jd - 1.0) / 2.0) * log_nl -
                               0.5 * jd * (kLog2Pi + std::log(ld)) + ld * jd +
                               3.0 * ld * ld * jd / (2.0 * nd) + eps_a * jd -
                               eps_b * jd * jd);
}

LogScalar superfactorial(std::int64_t ell) {
    if (ell < 0) throw std::invalid_argument("superfactorial requires ell >= 0");
    double sum = 0;
    for (std::int64_t r = 1; r <= ell; ++r) sum += lgamma_int(r + 1);
    return LogScalar::from_log(sum);
}

LogScalar superfactorial_ratio_asym(std::int64_t ell, std::int64_t x) {
    if (ell < 1 || x < 0) throw std::invalid_argument("bad superfactorial ratio arguments");
    if (static_cast<double>(x) > 3.0 * std::sqrt(static_cast<double>(ell)))
        throw std::invalid_argument("superfactorial ratio guard x <= 3 sqrt(ell) violated");
    const double ld = static_cast<double>(ell), xd = static_cast<double>(x);
    const double eps_a = xd / (2.0 * ld);
    const double eps_b = xd / (6.0 * ld) + xd * xd / (24.0 * ld * ld);
    return LogScalar::from_log((-ld * xd + xd * xd / 2.0 - xd) * std::log(ld) + ld * xd +
                               eps_a * xd - eps_b * xd * xd - 0.5 * xd * kLog2Pi);
}

namespace {

TheoryContext build_context(std::int64_t n, double a, double eps) {
    if (n < 2) throw std::invalid_argument("context requires n >= 2");
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("exponent a must lie in (0,1)");
    TheoryContext ctx;
    ctx.n = n;
    ctx.a = a;
    ctx.eps = eps;
    ctx.b = 0.5 - 2.0 * eps;
    ctx.c = 0.25 - eps / 3.0;
    const double nd = static_cast<double>(n);
    ctx.ell = std::max<std::int64_t>(2, std::llround(std::pow(nd, a)));
    ctx.k = n - ctx.ell;
    const double log_n = std::log(nd);
    ctx.omega = (1.0 - a) * log_n;
    if (ctx.omega <= 1.0)
        throw std::invalid_argument("context requires (1-a) ln n > 1 (n too small)");
    ctx.omega1 = log_n * log_n;
    ctx.omega2 = std::pow(nd, ctx.c);

    const double target = 2.0 * static_cast<double>(ctx.ell) +
                          4.0 * static_cast<double>(ctx.ell) / (ctx.omega - 1.0);
    int j0 = 1;
    while (static_cast<double>(j0) * (j0 + 3.0) < target) ++j0;
    ctx.j0 = j0;
    ctx.theta0 = static_cast<double>(j0) * j0 - target;

    const double ld = static_cast<double>(ctx.ell);
    const double j0d = static_cast<double>(j0);
    const double inner = (1.0 + 1.0 / j0d) * std::log(j0d + 1.0) +
                         (ld - (j0d - 1.0) / 2.0) * log_n +
                         (ld - 1.0 / 3.0 + 4.0 / (3.0 * j0d)) +
                         std::log(j0d) / (2.0 * j0d) + (ctx.b / j0d) * log_n -
                         ((j0d - 1.0) / (2.0 * j0d)) * kLog2Pi -
                         (ld - j0d / 2.0 + 1.0) * std::log(ld);
    ctx.mu0 = LogScalar::from_log(-1.0 + (j0d / (j0d + 1.0)) * inner);

    const LogScalar drop =
        LogScalar::from_value(ctx.omega1) * log_binom(n, ctx.ell - ctx.j0);
    if (!(ctx.mu0 > drop)) {
        ctx.mu1.reset();
    } else {
        ctx.mu1 = sub_positive(ctx.mu0, drop);
    }
    return ctx;
}

} // namespace

TheoryContext TheoryContext::from_eps(std::int64_t n, double eps) {
    if (!(eps > 0.0 && eps < 0.25)) throw std::invalid_argument("eps must lie in (0, 1/4)");
    return build_context(n, 0.5 - eps, eps);
}

TheoryContext TheoryContext::from_exponent(std::int64_t n, double a) {
    if (!(a > 0.25 && a < 0.5)) throw std::invalid_argument("exponent a must lie in (1/4, 1/2)");
    return build_context(n, a, 0.5 - a);
}

LogScalar zeta(int j, const TheoryContext& ctx) {
    if (j < 0 || j > ctx.j0) throw std::invalid_argument("zeta requires 0 <= j <= j0");
    const LogScalar e = eta(ctx.n, ctx.ell, j, EtaMode::exact);
    if (e.is_zero()) throw std::invalid_argument("eta(j) vanishes for this context");
    return binom_of_log(ctx.mu0, ctx.j0 + 1) /
           (LogScalar::from_value(static_cast<double>(ctx.j0)) *
            binom_of_log(ctx.mu0, ctx.j0 - j) * e);
}

LogScalar xi(int j, LogScalar t, const TheoryContext& ctx) {
    if (j < 0 || j > ctx.j0) throw std::invalid_argument("xi requires 0 <= j <= j0");
    const LogScalar e = eta(ctx.n, ctx.ell, j, EtaMode::exact);
    if (e.is_zero()) throw std::invalid_argument("eta(j) vanishes for this context");
    return (binom_of_log(ctx.mu0, ctx.j0 + 1) / e) *
           (binom_of_log(t, j) / binom_of_log(ctx.mu0, ctx.j0));
}

double xi_ratio(const TheoryContext& ctx) {
    const LogScalar hi = xi(ctx.j0 - 1, ctx.mu0, ctx);
    const LogScalar lo = xi(ctx.j0, ctx.mu0, ctx);
    return std::exp(hi.log_value() - lo.log_value());
}

NjLj nj_lj(int j, const TheoryContext& ctx, int jstar) {
    if (jstar < 0 || jstar > ctx.j0) throw std::invalid_argument("jstar out of range");
    NjLj out;
    out.nj = log_binom(ctx.n, ctx.ell - j);
    const LogScalar e = eta(ctx.n, ctx.ell, j, EtaMode::exact);
    if (e.is_zero()) throw std::invalid_argument("eta(j) vanishes for this context");
    out.lj = binom_of_log(ctx.mu0, ctx.j0 + 1) /
             (LogScalar::from_value(static_cast<double>(ctx.j0)) * e *
              binom_of_log(ctx.mu0, ctx.j0 - jstar));
    return out;
}

namespace {

// least t (log-space) with lhs * C(t, m) >= n, by doubling + bisection
LogScalar solve_t_hat(LogScalar lhs_over_n, int m) {
    if (m <= 0) throw std::invalid_argument("schedule needs j > jstar");
    auto ok = [&](double log_t) {
        const LogScalar c = binom_of_log(LogScalar::from_log(log_t), m);
        if (c.is_zero()) return false;
        return lhs_over_n.log_value() + c.log_value() >= 0.0;
    };
    double lo = std::log(static_cast<double>(m)); // below this C(t,m) < 1
    double hi = lo + 8.0;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e18) throw std::runtime_error("t_hat out of representable range");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return LogScalar::from_log(hi);
}

} // namespace

ScheduleEntry schedule(int j, const TheoryContext& ctx, int jstar, LogScalar tau0) {
    if (j < jstar || j > ctx.j0 - 1)
        throw std::invalid_argument("schedule requires jstar <= j <= j0-1");
    ScheduleEntry cur;
    cur.j = jstar;
    cur.t_hat = tau0;
    cur.t_j = tau0;
    cur.delta = 0.0;
    cur.below_mu0 = tau0 < ctx.mu0;
    for (int jj = jstar + 1; jj <= j; ++jj) {
        const NjLj prev = nj_lj(jj - 1, ctx, jstar); // Y-bound pairing for level jj
        ScheduleEntry next;
        next.j = jj;
        next.t_hat = solve_t_hat(prev.lj / (prev.nj * LogScalar::from_value(
                                                          static_cast<double>(ctx.n))),
                                 jj - jstar);
        const LogScalar chained = LogScalar::from_value(ctx.omega2) * cur.t_j;
        next.t_j = chained > next.t_hat ? chained : next.t_hat;
        next.delta = static_cast<double>(jj - jstar) / ctx.omega2;
        next.below_mu0 = next.t_j < ctx.mu0;
        cur = next;
    }
    return cur;
}

double notall_bound(std::int64_t n, std::int64_t k) {
    if (k < 1 || k >= n) throw std::invalid_argument("notall_bound requires 1 <= k < n");
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double one_minus_rho =
        std::min(std::pow((kd + 1.0) / (std::numbers::e * nd), 100.0),
                 std::pow(1.0 / (10.0 * std::numbers::e), 10.0));
    return 0.5 * one_minus_rho * std::exp(-10.0 * nd / (9.0 * kd));
}

double notall_bound_logspace(std::int64_t n, std::int64_t k) {
    if (k < 1 || k >= n) throw std::invalid_argument("notall_bound requires 1 <= k < n");
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_term1 = 100.0 * (std::log(kd + 1.0) - 1.0 - std::log(nd));
    const double log_term2 = -10.0 * (std::log(10.0) + 1.0);
    return std::exp(std::min(log_term1, log_term2) - std::log(2.0) -
                    10.0 * nd / (9.0 * kd));
}

double conc_bound(double N, double E, double C, double t) {
    if (N < 1 || E <= 0 || C <= 0 || t < 0) throw std::invalid_argument("bad conc_bound arguments");
    if (t > N * E) throw std::invalid_argument("conc_bound requires t <= N E");
    return 2.0 * std::exp(-t * t / (4.0 * N * E * C));
}

double hoeffding_bound(double N, double C, double t) {
    if (N < 1 || C <= 0 || t < 0) throw std::invalid_argument("bad hoeffding_bound arguments");
    return 2.0 * std::exp(-2.0 * t * t / (N * C * C));
}

namespace {

std::int64_t binom_small(std::int64_t t, int i) {
    if (i < 0 || i > t) return 0;
    std::int64_t r = 1;
    for (int s = 1; s <= i; ++s) r = r * (t - i + s) / s;
    return r;
}

} // namespace

Rational rec1_upper(const std::vector<Rational>& alphas, const std::vector<Rational>& betas,
                    std::int64_t t, int j) {
    if (static_cast<int>(alphas.size()) != j + 1)
        throw std::invalid_argument("rec1_upper needs alpha_0..alpha_j");
    if (static_cast<int>(betas.size()) < j)
        throw std::invalid_argument("rec1_upper needs beta_0..beta_{j-1}");
    for (const auto& b : betas)
        if (b.negative()) throw std::invalid_argument("rec1 requires nonnegative beta");
    Rational total(0);
    for (int i = 0; i <= j + 1; ++i) {
        const Rational alpha = (j - i >= 0) ? alphas[static_cast<std::size_t>(j - i)] : Rational(1);
        Rational prod(1);
        for (int s = std::max(j - i, 0); s <= j - 1; ++s)
            prod = prod * betas[static_cast<std::size_t>(s)];
        total = total + alpha * prod * binom_small(t, i);
    }
    return total;
}

Rational rec1_lower(const Rational& alpha_jstar, const std::vector<Rational>& betas,
                    std::int64_t t, int j, int jstar) {
    if (j < jstar) throw std::invalid_argument("rec1_lower requires j >= jstar");
    if (static_cast<int>(betas.size()) < j - jstar)
        throw std::invalid_argument("rec1_lower needs beta_{jstar}..beta_{j-1}");
    for (const auto& b : betas)
        if (b.negative()) throw std::invalid_argument("rec1 requires nonnegative beta");
    Rational prod(1);
    for (int s = 0; s < j - jstar; ++s) prod = prod * betas[static_cast<std::size_t>(s)];
    return alpha_jstar * prod * binom_small(t, j - jstar);
}

LogScalar rec1_upper_log(const std::vector<LogScalar>& alphas,
                         const std::vector<LogScalar>& betas, std::uint64_t t, int j) {
    if (static_cast<int>(alphas.size()) != j + 1)
        throw std::invalid_argument("rec1_upper_log needs alpha_0..alpha_j");
    if (static_cast<int>(betas.size()) < j)
        throw std::invalid_argument("rec1_upper_log needs beta_0..beta_{j-1}");
    LogScalar total = LogScalar::zero();
    for (int i = 0; i <= j + 1; ++i) {
        LogScalar term = (j - i >= 0) ? alphas[static_cast<std::size_t>(j - i)]
                                      : LogScalar::from_log(0.0);
        for (int s = std::max(j - i, 0); s <= j - 1; ++s)
            term = term * betas[static_cast<std::size_t>(s)];
        term = term * log_binom(static_cast<std::int64_t>(t), i);
        total = total + term;
    }
    return total;
}

} // namespace hdla::theory
