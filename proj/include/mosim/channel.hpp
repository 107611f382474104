#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mosim/correlation.hpp"
#include "mosim/pdp.hpp"

namespace mosim {

// Per-subcarrier channel matrices H[n], n = 0..N-1, each N_r x N_t.
struct MimoChannelRealization {
    std::vector<Eigen::MatrixXcd> per_subcarrier;
    bool correlated = false;

    int num_subcarriers() const { return static_cast<int>(per_subcarrier.size()); }
};

// Time-domain tap gains for one MIMO channel draw: taps[l] is the
// N_r x N_t matrix of gains for delay l/W.
struct MimoTaps {
    std::vector<Eigen::MatrixXcd> taps;

    int memory() const { return static_cast<int>(taps.size()) - 1; }
};

// H[n](r,t) = length-N DFT of the (r,t) tap sequence at bin n.
MimoChannelRealization channel_frequency_response(const MimoTaps& taps, int n);

// Quasi-static NLOS Rayleigh draw: i.i.d. CN(0, p_l) per tap per antenna
// pair, then spatial correlation applied tap-wise (the transform is linear,
// so correlating taps and correlating H[n] are equivalent).
MimoTaps draw_block_static_taps(const PowerDelayProfile& pdp, int n_r, int n_t,
                                const Eigen::MatrixXd* sqrt_r_r,
                                const Eigen::MatrixXd* sqrt_r_t,
                                std::uint64_t seed);

} // namespace mosim
