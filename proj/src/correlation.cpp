#include "mosim/correlation.hpp"

#include <stdexcept>

namespace mosim {

Eigen::MatrixXd ula_correlation(double rho, int n) {
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("ula_correlation: rho must be in [0, 1]");
    if (n < 1) throw std::invalid_argument("ula_correlation: n must be >= 1");
    Eigen::MatrixXd r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = static_cast<double>(i - j);
            r(i, j) = (i == j) ? 1.0 : std::pow(rho, d * d);
        }
    return r;
}

Eigen::MatrixXd ura_correlation(const CorrelationSpec& spec) {
    if (spec.array_kind != ArrayKind::Ura)
        throw std::invalid_argument("ura_correlation: spec is not URA");
    if (spec.nx < 1 || spec.ny < 1 || spec.nx * spec.ny != spec.n)
        throw std::invalid_argument("ura_correlation: geometry mismatch, nx*ny != n");
    const Eigen::MatrixXd rx = ula_correlation(spec.rho, spec.nx);
    const Eigen::MatrixXd ry = ula_correlation(spec.rho, spec.ny);
    Eigen::MatrixXd r(spec.n, spec.n);
    for (int i = 0; i < spec.nx; ++i)
        for (int j = 0; j < spec.nx; ++j)
            r.block(i * spec.ny, j * spec.ny, spec.ny, spec.ny) = rx(i, j) * ry;
    return r;
}

Eigen::MatrixXd correlation_matrix(const CorrelationSpec& spec) {
    return spec.array_kind == ArrayKind::Ula ? ula_correlation(spec.rho, spec.n)
                                             : ura_correlation(spec);
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& r, double tol) {
    if (r.rows() != r.cols())
        throw std::invalid_argument("matrix_sqrt_psd: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol)
            throw std::invalid_argument(
                "matrix_sqrt_psd: matrix is not PSD (eigenvalue " +
                std::to_string(ev(i)) + ")");
        ev(i) = std::max(0.0, ev(i));
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

std::vector<Eigen::MatrixXcd> apply_spatial_correlation(
    const std::vector<Eigen::MatrixXcd>& g, const Eigen::MatrixXd& r_t,
    const Eigen::MatrixXd& r_r) {
    const Eigen::MatrixXd sqrt_r = matrix_sqrt_psd(r_r);
    const Eigen::MatrixXd sqrt_t = matrix_sqrt_psd(r_t);
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(g.size());
    for (const auto& gn : g)
        out.push_back(sqrt_r * gn * sqrt_t.transpose()); // sqrt_t is real symmetric
    return out;
}

} // namespace mosim
