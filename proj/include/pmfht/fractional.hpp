#pragma once

#include "pmfht/harmonic.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pmfht {

// Eigendecomposition F = P J P^{-1} of the manifold Fourier matrix, with the
// principal-branch logarithm of every eigenvalue cached so that fractional
// powers of different orders share one log per eigenvalue. That sharing is
// what makes F^(a) F^(b) = F^(a+b) hold to rounding.
struct FractionalOperator {
    Eigen::MatrixXcd P;
    Eigen::VectorXcd J;
    Eigen::MatrixXcd P_inv;
    Eigen::VectorXcd log_J;
    double cond_p = 0.0;              // 1-norm condition estimate of P
    std::uint64_t basis_id = 0;       // copied from the basis that built F
    std::vector<int> near_branch_cut; // modes with |Arg J_k| > pi - 1e-9

    Eigen::Index size() const { return J.size(); }
};

// Real parts of an inverse fractional transform, plus what was discarded:
// imag_ratio is |Im g| / |g| over all channels, and warnings describe any
// branch-cut or residue trouble. complex_values keeps the full result.
struct InverseResult {
    Eigen::MatrixXd values;
    Eigen::MatrixXcd complex_values;
    double imag_ratio = 0.0;
    std::vector<std::string> warnings;
};

// Complex eigendecomposition of the (real, nonsymmetric) Fourier matrix.
// Rejects near-defective inputs: cond_p above defect_threshold means no
// reliable fractional power exists and the caller should perturb the cloud
// or reduce N.
FractionalOperator decompose_fourier_matrix(const Eigen::MatrixXd& fourier,
                                            std::uint64_t basis_id = 0,
                                            double defect_threshold = 1e10);

// F^(a) = P diag(exp(a log J)) P^{-1}. If `warnings` is non-null, a note is
// appended when a is non-integer and eigenvalues sit on the branch cut.
Eigen::MatrixXcd fractional_matrix(const FractionalOperator& opr, double a,
                                   std::vector<std::string>* warnings = nullptr);

// Forward transform of order a, coeffs = F^(a) f per channel, computed as
// P (J^a (P^{-1} f)) without forming the dense power.
SpectralSignal pmfht_forward(const FractionalOperator& opr, const Eigen::MatrixXd& f,
                             double a, std::vector<std::string> channels = {});

// Applies F^(-a) to the signal and returns real parts. A residue above
// 1e-6 of the result norm is reported in warnings, never silently dropped.
InverseResult pmfht_inverse(const FractionalOperator& opr, const SpectralSignal& sig);

} // namespace pmfht
