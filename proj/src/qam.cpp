#include "mosim/qam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mosim {

namespace {

int gray_encode(int i) { return i ^ (i >> 1); }

int int_log2(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

// amplitude for the axis label g (Gray), L levels: decode then map to grid
double level_for_gray(int g, int l) {
    int i = g;
    for (int shift = 1; shift < 32; shift <<= 1) i ^= i >> shift;
    return 2.0 * i - (l - 1);
}

// nearest axis level index with smaller-Gray-label tie break
int axis_decision(double a, int l, const std::vector<int>& gray_by_index) {
    const double pos = (a + (l - 1)) / 2.0;
    int lo = static_cast<int>(std::floor(pos));
    lo = std::clamp(lo, 0, l - 1);
    int hi = std::clamp(lo + 1, 0, l - 1);
    const double dlo = std::abs(a - (2.0 * lo - (l - 1)));
    const double dhi = std::abs(a - (2.0 * hi - (l - 1)));
    if (dlo < dhi) return lo;
    if (dhi < dlo) return hi;
    return gray_by_index[lo] <= gray_by_index[hi] ? lo : hi;
}

} // namespace

QamConstellation QamConstellation::make(int order) {
    if (order != 4 && order != 16 && order != 256)
        throw std::invalid_argument("qam: order must be 4, 16 or 256");
    QamConstellation c;
    c.order = order;
    c.bits_per_symbol = int_log2(order);
    const int l = 1 << (c.bits_per_symbol / 2); // levels per axis
    c.avg_energy = 2.0 * (l * l - 1) / 3.0;
    c.points.resize(order);
    const int axis_bits = c.bits_per_symbol / 2;
    for (int label = 0; label < order; ++label) {
        const int gi = label >> axis_bits;
        const int gq = label & ((1 << axis_bits) - 1);
        c.points[label] = {level_for_gray(gi, l), level_for_gray(gq, l)};
    }
    c.levels.resize(l);
    for (int i = 0; i < l; ++i) c.levels[i] = 2.0 * i - (l - 1);
    return c;
}

int QamConstellation::hard_decision(std::complex<double> x) const {
    const int axis_bits = bits_per_symbol / 2;
    const int l = 1 << axis_bits;
    static thread_local std::vector<int> gray_by_index;
    if (static_cast<int>(gray_by_index.size()) != l) {
        gray_by_index.assign(l, 0);
        for (int g = 0; g < l; ++g) {
            int i = g;
            for (int shift = 1; shift < 32; shift <<= 1) i ^= i >> shift;
            gray_by_index[i] = g;
        }
    }
    const int ii = axis_decision(x.real(), l, gray_by_index);
    const int iq = axis_decision(x.imag(), l, gray_by_index);
    return (gray_by_index[ii] << axis_bits) | gray_by_index[iq];
}

std::complex<double> QamConstellation::quantize_point(std::complex<double> x) const {
    return points[hard_decision(x)];
}

std::vector<std::complex<double>> qam_modulate(const std::vector<std::uint8_t>& bits,
                                               const QamConstellation& c) {
    if (bits.size() % c.bits_per_symbol != 0)
        throw std::invalid_argument("qam_modulate: bit count not divisible by log2 M");
    std::vector<std::complex<double>> out;
    out.reserve(bits.size() / c.bits_per_symbol);
    for (std::size_t i = 0; i < bits.size(); i += c.bits_per_symbol) {
        int label = 0;
        for (int b = 0; b < c.bits_per_symbol; ++b)
            label = (label << 1) | (bits[i + b] & 1);
        out.push_back(c.points[label]);
    }
    return out;
}

std::vector<std::uint8_t> qam_demodulate(const std::vector<std::complex<double>>& symbols,
                                         const QamConstellation& c) {
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * c.bits_per_symbol);
    for (const auto& s : symbols) {
        const int label = c.hard_decision(s);
        for (int b = c.bits_per_symbol - 1; b >= 0; --b)
            out.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
    return out;
}

std::vector<std::complex<double>> quantize_to_constellation(
    const std::vector<std::complex<double>>& soft, const QamConstellation& c) {
    std::vector<std::complex<double>> out;
    out.reserve(soft.size());
    for (const auto& s : soft) out.push_back(c.quantize_point(s));
    return out;
}

} // namespace mosim
