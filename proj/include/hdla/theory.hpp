// Exact and log-space evaluation of the closed-form quantities, bounds and
// deterministic recurrences attached to the process: reference times, the
// eta/zeta/xi tower, superfactorial asymptotics, concentration bounds and
// the level-growth schedule.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hdla/logscalar.hpp"
#include "hdla/rational.hpp"

namespace hdla::theory {

// log C(n,k) via lgamma; -inf (LogScalar zero) outside the triangle.
LogScalar log_binom(std::int64_t n, std::int64_t k);

// C(mu, m) for a log-space upper argument, by falling factorial:
// sum_{i<m} log(mu - i) - log m!. Requires m <= mu.
LogScalar binom_of_log(LogScalar mu, int m);

// C(m,s) ~ (m^s/s!) e^{-s^2/2m}, valid when s^3 = O(m^2); guarded s^3 <= m^2.
LogScalar binom_approx(double m, std::int64_t s);

struct TauResult {
    double tau = 0;   // (eps/4) C(n,k+1)
    double omega = 0; // (eps/4)(n-k)/(k+1)
};
TauResult tau_k_eps(std::int64_t n, std::int64_t k, double eps);

enum class EtaMode { exact, asymptotic };

// eta(j) = prod_{s<j} C(n, ell-s). Exact mode sums log-binomials; asymptotic
// mode evaluates the closed-form estimate (valid for ell << sqrt(n), j << ell;
// guarded ell <= n^0.49 and j <= ell^0.6).
LogScalar eta(std::int64_t n, std::int64_t ell, std::int64_t j, EtaMode mode);

// Superfactorial phi(ell) = prod_{r<=ell} r! (exact, in log space), and the
// closed-form estimate of phi(ell-x)/phi(ell) for x = O(sqrt(ell)),
// guarded x <= 3 sqrt(ell).
LogScalar superfactorial(std::int64_t ell);
LogScalar superfactorial_ratio_asym(std::int64_t ell, std::int64_t x);

// All derived parameters for one dimension n. Exponents follow
// a = 1/2 - eps, b = 1/2 - 2 eps, c = 1/4 - eps/3; ell = round(n^a) >= 2;
// omega = (1-a) ln n (natural log convention throughout).
struct TheoryContext {
    std::int64_t n = 0;
    double eps = 0, a = 0, b = 0, c = 0;
    std::int64_t ell = 0, k = 0;
    double omega = 0, omega1 = 0, omega2 = 0;
    int j0 = 0;
    double theta0 = 0;
    LogScalar mu0;
    std::optional<LogScalar> mu1; // mu0 - omega1 C(n, ell-j0); absent if <= 0
    std::optional<int> jstar;     // observed offset, filled at runtime

    static TheoryContext from_eps(std::int64_t n, double eps);
    static TheoryContext from_exponent(std::int64_t n, double a);
};

// zeta(j, mu0) = C(mu0, j0+1) / (j0 C(mu0, j0-j) eta(j)), 0 <= j <= j0.
LogScalar zeta(int j, const TheoryContext& ctx);

// xi(j, t) = [C(mu0, j0+1)/eta(j)] [C(t, j)/C(mu0, j0)].
LogScalar xi(int j, LogScalar t, const TheoryContext& ctx);

// xi(j0-1, mu0) / xi(j0, mu0), by log-space subtraction.
double xi_ratio(const TheoryContext& ctx);

struct NjLj {
    LogScalar nj; // C(n, ell-j)
    LogScalar lj; // C(mu0, j0+1) / (j0 eta(j) C(mu0, j0-jstar))
};
NjLj nj_lj(int j, const TheoryContext& ctx, int jstar);

// Level-growth schedule: t_hat_j is the first t at which the guaranteed
// lower bound on level j's occupancy reaches n (bisection on log C(t, j-j*)),
// t_j = max(t_hat_j, omega2 t_{j-1}) with t_{jstar} = tau0, and
// delta_j = (j - jstar)/omega2.
struct ScheduleEntry {
    int j = 0;
    LogScalar t_hat;
    LogScalar t_j;
    double delta = 0;
    bool below_mu0 = false; // log t_j < log mu0 sanity
};
ScheduleEntry schedule(int j, const TheoryContext& ctx, int jstar, LogScalar tau0);

// ((1-rho)/2) e^{-10n/9k} with rho = max(1-((k+1)/en)^100, 1-(1/10e)^10).
double notall_bound(std::int64_t n, std::int64_t k);
double notall_bound_logspace(std::int64_t n, std::int64_t k); // dual route

// Bernstein-derived bound 2 exp(-t^2/(4NEC)) for sums of independent
// variables in [0,C] with means <= E; requires t <= NE.
double conc_bound(double N, double E, double C, double t);
// Hoeffding comparison 2 exp(-2t^2/(NC^2)).
double hoeffding_bound(double N, double C, double t);

// Closed forms of the deterministic recurrence bounds, exact over rationals.
// upper: x_{j,t} <= sum_{i=0}^{j+1} alpha_{j-i} C(t,i) prod_{s=j-i}^{j-1} beta_s
// (alpha_{-1} = beta_{-1} = 1); lower: alpha_{j*} C(t, j-j*) prod_{s=j*}^{j-1} beta_s.
Rational rec1_upper(const std::vector<Rational>& alphas, // alpha_0..alpha_j
                    const std::vector<Rational>& betas,  // beta_0..beta_{j-1}
                    std::int64_t t, int j);
Rational rec1_lower(const Rational& alpha_jstar,
                    const std::vector<Rational>& betas, // beta_{jstar}..beta_{j-1}
                    std::int64_t t, int j, int jstar);

// Same upper closed form in log space (for bound columns fed by zeta seeds).
LogScalar rec1_upper_log(const std::vector<LogScalar>& alphas,
                         const std::vector<LogScalar>& betas,
                         std::uint64_t t, int j);

} // namespace hdla::theory
