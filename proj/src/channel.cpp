#include "mosim/channel.hpp"

#include <stdexcept>

#include "mosim/fft.hpp"
#include "mosim/rng.hpp"

namespace mosim {

MimoChannelRealization channel_frequency_response(const MimoTaps& taps, int n) {
    if (taps.taps.empty()) throw std::invalid_argument("channel: no taps");
    if (static_cast<int>(taps.taps.size()) > n)
        throw std::invalid_argument("channel: more taps than subcarriers (CP model violated)");
    const Eigen::Index n_r = taps.taps[0].rows();
    const Eigen::Index n_t = taps.taps[0].cols();

    MimoChannelRealization out;
    out.per_subcarrier.assign(n, Eigen::MatrixXcd::Zero(n_r, n_t));
    std::vector<std::complex<double>> seq(taps.taps.size());
    for (Eigen::Index r = 0; r < n_r; ++r)
        for (Eigen::Index t = 0; t < n_t; ++t) {
            for (std::size_t l = 0; l < taps.taps.size(); ++l) seq[l] = taps.taps[l](r, t);
            const auto h = dft_raw(seq, static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) out.per_subcarrier[k](r, t) = h[k];
        }
    return out;
}

MimoTaps draw_block_static_taps(const PowerDelayProfile& pdp, int n_r, int n_t,
                                const Eigen::MatrixXd* sqrt_r_r,
                                const Eigen::MatrixXd* sqrt_r_t,
                                std::uint64_t seed) {
    Rng rng(seed);
    MimoTaps out;
    out.taps.reserve(pdp.tap_powers.size());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double p : pdp.tap_powers) {
        Eigen::MatrixXcd g(n_r, n_t);
        const double amp = std::sqrt(p);
        for (int r = 0; r < n_r; ++r)
            for (int t = 0; t < n_t; ++t)
                g(r, t) = amp * inv_sqrt2 *
                          std::complex<double>(rng.normal(), rng.normal());
        if (sqrt_r_r && sqrt_r_t) g = (*sqrt_r_r) * g * sqrt_r_t->transpose();
        out.taps.push_back(std::move(g));
    }
    return out;
}

} // namespace mosim
