#pragma once

namespace mosim {

// Gray-labeled square M-QAM bit error probability over flat Rayleigh fading
// with average Eb/N0 gamma_b (dB). Exact per-bit PAM expansion with each
// Gaussian Q term averaged over the fading in closed form. M in {4,16,256}.
double analytic_ber_rayleigh(int mod_order, double ebn0_db);

// log10(ber_scn) - log10(ber_ref); both inputs must be in (0, 1].
double sensibility_kappa(double ber_scn, double ber_ref);

} // namespace mosim
