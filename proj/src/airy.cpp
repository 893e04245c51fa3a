#include "edgestat/specfun.hpp"
#include "edgestat/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace edgestat {

namespace {

constexpr long double ai0 = 0.355028053887817239260063186004183176L;
constexpr long double aip0 = -0.258819403792806798405183560189203963L;

// Where the Maclaurin and asymptotic branches hand over.
constexpr double pos_switch = 6.5;
constexpr double neg_switch = -8.0;

AiryValue maclaurin(double xd)
{
    const long double x = xd, x3 = x * x * x;
    long double f = 1, g = x, fp = 0.5L * x * x, gp = 1;
    long double tf = 1, tg = x, tfp = fp, tgp = 1;
    for (int k = 1; k < 400; ++k) {
        tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
        tfp *= x3 / ((3.0L * k) * (3.0L * k + 2));
        tgp *= x3 / ((3.0L * k) * (3.0L * k - 2));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        long double big = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
        if (big < 1e-22L * (std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp) + 1e-300L))
            break;
    }
    return {static_cast<double>(ai0 * f + aip0 * g), static_cast<double>(ai0 * fp + aip0 * gp)};
}

// u_k and v_k of the standard asymptotic expansions, summed until the terms stop shrinking.
struct AsymptoticSums {
    long double u_even, u_odd, v_even, v_odd; // alternating in powers of 1/zeta^2
    long double u_all, v_all;                 // plain alternating sums in 1/zeta
};

AsymptoticSums asymptotic_sums(long double zeta)
{
    AsymptoticSums s{1, 0, 1, 0, 1, 1};
    long double u = 1, last_u = INFINITY, last_v = INFINITY;
    bool done_u = false, done_v = false;
    long double zk = 1;
    for (int k = 1; k < 60 && !(done_u && done_v); ++k) {
        u *= (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / (216.0L * k * (2.0L * k - 1));
        long double v = -(6.0L * k + 1) / (6.0L * k - 1) * u;
        zk *= zeta;
        long double tu = u / zk, tv = v / zk;
        long double sign_all = (k % 2 == 0) ? 1 : -1;
        // (-1)^j for the even/odd split: k = 2j or 2j + 1
        long double sign_split = ((k / 2) % 2 == 0) ? 1 : -1;
        if (!done_u) {
            if (std::fabs(tu) >= last_u || std::fabs(tu) < 1e-21L) done_u = true;
            if (std::fabs(tu) < last_u) {
                s.u_all += sign_all * tu;
                if (k % 2 == 0) s.u_even += sign_split * tu;
                else s.u_odd += sign_split * tu;
            }
            last_u = std::fabs(tu);
        }
        if (!done_v) {
            if (std::fabs(tv) >= last_v || std::fabs(tv) < 1e-21L) done_v = true;
            if (std::fabs(tv) < last_v) {
                s.v_all += sign_all * tv;
                if (k % 2 == 0) s.v_even += sign_split * tv;
                else s.v_odd += sign_split * tv;
            }
            last_v = std::fabs(tv);
        }
    }
    return s;
}

AiryValue asymptotic_positive(double xd)
{
    const long double x = xd;
    const long double zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const long double x14 = std::sqrt(std::sqrt(x));
    AsymptoticSums s = asymptotic_sums(zeta);
    const long double e = std::exp(-zeta) / (2 * std::sqrt(std::numbers::pi_v<long double>));
    return {static_cast<double>(e / x14 * s.u_all), static_cast<double>(-e * x14 * s.v_all)};
}

AiryValue asymptotic_negative(double xd)
{
    const long double z = -static_cast<long double>(xd);
    const long double zeta = 2.0L / 3.0L * z * std::sqrt(z);
    const long double z14 = std::sqrt(std::sqrt(z));
    AsymptoticSums s = asymptotic_sums(zeta);
    // cos(zeta - pi/4) and sin(zeta - pi/4) without subtracting a rounded pi/4
    const long double c = std::cos(zeta), sn = std::sin(zeta);
    const long double r = std::numbers::sqrt2_v<long double> / 2;
    const long double cm = r * (c + sn), sm = r * (sn - c);
    const long double rp = 1 / std::sqrt(std::numbers::pi_v<long double>);
    long double ai = rp / z14 * (cm * s.u_even + sm * s.u_odd);
    long double aip = rp * z14 * (sm * s.v_even - cm * s.v_odd);
    return {static_cast<double>(ai), static_cast<double>(aip)};
}

void check_range(double x)
{
    if (!std::isfinite(x) || std::fabs(x) > 200.0)
        throw DomainError("airy: argument out of range [-200, 200]: " + std::to_string(x));
}

} // namespace

AiryValue detail::airy_unchecked(double x)
{
    if (x > pos_switch) {
        if (x > 105.0) return {0.0, 0.0};
        return asymptotic_positive(x);
    }
    if (x < neg_switch) return asymptotic_negative(x);
    return maclaurin(x);
}

AiryValue airy(double x)
{
    check_range(x);
    return detail::airy_unchecked(x);
}

double airy_ai(double x) { return airy(x).ai; }
double airy_ai_prime(double x) { return airy(x).aip; }

} // namespace edgestat
