#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mosim {

enum class ArrayKind { Ula, Ura };

struct CorrelationSpec {
    ArrayKind array_kind = ArrayKind::Ula;
    double rho = 0.0;   // in [0, 1]
    int n = 1;          // antenna count on this side
    int nx = 1, ny = 1; // URA geometry, nx * ny == n
};

// Toeplitz ULA correlation, entry (i,j) = rho^((i-j)^2).
Eigen::MatrixXd ula_correlation(double rho, int n);

// URA correlation as Kronecker product of the two per-axis ULA matrices.
Eigen::MatrixXd ura_correlation(const CorrelationSpec& spec);

Eigen::MatrixXd correlation_matrix(const CorrelationSpec& spec);

// Symmetric PSD square root via eigendecomposition; eigenvalues below
// -tol are rejected, tiny negatives are clipped to zero.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& r, double tol = 1e-10);

// H_corr[n] = sqrt(R_r) G[n] sqrt(R_t)^H applied to every subcarrier matrix.
std::vector<Eigen::MatrixXcd> apply_spatial_correlation(
    const std::vector<Eigen::MatrixXcd>& g, const Eigen::MatrixXd& r_t,
    const Eigen::MatrixXd& r_r);

} // namespace mosim
