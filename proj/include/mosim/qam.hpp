#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mosim {

// Square M-QAM on the integer grid {+-1, +-3, ...} with per-axis reflected
// Gray labeling. points[label] is the constellation point for that label;
// the label packs the in-phase bits (MSBs) then the quadrature bits.
struct QamConstellation {
    int order = 4;                               // M: 4, 16 or 256
    int bits_per_symbol = 2;                     // log2 M
    double avg_energy = 2.0;                     // E_s = 2(L^2-1)/3
    std::vector<std::complex<double>> points;    // size M
    std::vector<double> levels;                  // sorted per-axis amplitudes

    static QamConstellation make(int order);     // throws on unsupported M

    // nearest point with lexicographically-smallest-label tie break
    int hard_decision(std::complex<double> x) const;
    std::complex<double> quantize_point(std::complex<double> x) const;
    double max_level() const { return levels.back(); }
};

// Gray-labeled mapping; bit count must divide log2 M. Bits are MSB-first
// per symbol.
std::vector<std::complex<double>> qam_modulate(const std::vector<std::uint8_t>& bits,
                                               const QamConstellation& c);

std::vector<std::uint8_t> qam_demodulate(const std::vector<std::complex<double>>& symbols,
                                         const QamConstellation& c);

// per-entry nearest constellation point
std::vector<std::complex<double>> quantize_to_constellation(
    const std::vector<std::complex<double>>& soft, const QamConstellation& c);

} // namespace mosim
