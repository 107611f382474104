#include "mosim/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace mosim {

namespace {

// E[Q(sqrt(c * gamma))] for gamma ~ Exp(mean gbar)
double rayleigh_q(double c, double gbar) {
    const double half = 0.5 * c * gbar;
    return 0.5 * (1.0 - std::sqrt(half / (1.0 + half)));
}

} // namespace

double analytic_ber_rayleigh(int mod_order, double ebn0_db) {
    if (mod_order != 4 && mod_order != 16 && mod_order != 256)
        throw std::invalid_argument("analytic_ber_rayleigh: M must be 4, 16 or 256");
    const double m = mod_order;
    const int bits = static_cast<int>(std::lround(std::log2(m)));
    const int sqrt_m = static_cast<int>(std::lround(std::sqrt(m)));
    const int axis_bits = bits / 2;
    const double gbar = std::pow(10.0, ebn0_db / 10.0);
    // each Q argument: (2i+1)^2 * 6 log2(M) / (2(M-1)) * gamma_b
    const double base = 6.0 * bits / (2.0 * (m - 1.0));

    double total = 0.0;
    for (int k = 1; k <= axis_bits; ++k) {
        const int upper = (1 << k); // (1 - 2^-k) sqrt(M) = sqrt(M) - sqrt(M)/2^k
        const int imax = sqrt_m - sqrt_m / upper - 1;
        double pk = 0.0;
        for (int i = 0; i <= imax; ++i) {
            const int arg = i * (1 << (k - 1)) / sqrt_m;
            const double sign = (arg % 2 == 0) ? 1.0 : -1.0;
            const double weight =
                (1 << (k - 1)) -
                static_cast<int>(std::floor(i * (1 << (k - 1)) / static_cast<double>(sqrt_m) + 0.5));
            const double c = (2.0 * i + 1.0) * (2.0 * i + 1.0) * base;
            pk += sign * weight * rayleigh_q(c, gbar);
        }
        total += (2.0 / sqrt_m) * pk;
    }
    // two identical axes carry all log2(M) bits
    return total * 2.0 * axis_bits / bits / axis_bits;
}

double sensibility_kappa(double ber_scn, double ber_ref) {
    if (!(ber_scn > 0.0) || ber_scn > 1.0 || !(ber_ref > 0.0) || ber_ref > 1.0)
        throw std::invalid_argument("sensibility_kappa: BER inputs must be in (0, 1]");
    return std::log10(ber_scn) - std::log10(ber_ref);
}

} // namespace mosim
