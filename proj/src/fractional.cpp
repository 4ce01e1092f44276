#include "pmfht/fractional.hpp"
#include "pmfht/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace pmfht {

namespace {

double one_norm(const Eigen::MatrixXcd& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

Eigen::VectorXcd mode_powers(const FractionalOperator& opr, double a,
                             std::vector<std::string>* warnings) {
    if (!std::isfinite(a))
        throw ConfigError("fractional power: order must be finite");
    if (warnings && a != std::round(a) && !opr.near_branch_cut.empty())
        warnings->push_back("order " + std::to_string(a) + ": " +
                            std::to_string(opr.near_branch_cut.size()) +
                            " eigenvalue(s) on the negative real axis; principal-branch "
                            "power is taken there");
    return (a * opr.log_J.array()).exp();
}

} // namespace

FractionalOperator decompose_fourier_matrix(const Eigen::MatrixXd& fourier,
                                            std::uint64_t basis_id, double defect_threshold) {
    const Eigen::Index n = fourier.rows();
    if (n < 1 || fourier.cols() != n)
        throw ConfigError("fractional decomposition: matrix must be square and nonempty");

    Eigen::EigenSolver<Eigen::MatrixXd> eig(fourier);
    if (eig.info() != Eigen::Success)
        throw NumericError("fractional decomposition: eigensolver did not converge");

    FractionalOperator opr;
    opr.P = eig.eigenvectors();
    opr.J = eig.eigenvalues();
    opr.basis_id = basis_id;

    const double j_scale = opr.J.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < n; ++k)
        if (std::abs(opr.J[k]) <= 1e-14 * j_scale)
            throw NumericError("fractional decomposition: eigenvalue " + std::to_string(k) +
                               " is numerically zero; the Fourier matrix must be invertible");

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(opr.P);
    opr.P_inv = lu.inverse();
    opr.cond_p = one_norm(opr.P) * one_norm(opr.P_inv);
    if (!std::isfinite(opr.cond_p) || opr.cond_p > defect_threshold)
        throw NumericError(
            "fractional decomposition: eigenvector condition " + std::to_string(opr.cond_p) +
            " exceeds " + std::to_string(defect_threshold) +
            "; the Fourier matrix is numerically defective. Perturb the point cloud or "
            "downsample to a smaller N.");

    const double recon =
        (opr.P * opr.J.asDiagonal() * opr.P_inv - fourier.cast<std::complex<double>>())
            .cwiseAbs()
            .maxCoeff();
    const double fm_scale = fourier.cwiseAbs().maxCoeff();
    if (recon > 1e-7 * fm_scale)
        throw NumericError("fractional decomposition: reconstruction error " +
                           std::to_string(recon) + " exceeds tolerance " +
                           std::to_string(1e-7 * fm_scale));

    // std::log takes the principal branch, Arg in (-pi, pi]. Each eigenvalue
    // is logged exactly once here; every power reuses these values.
    opr.log_J.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        opr.log_J[k] = std::log(opr.J[k]);
        if (std::abs(std::arg(opr.J[k])) > std::numbers::pi - 1e-9)
            opr.near_branch_cut.push_back(static_cast<int>(k));
    }
    return opr;
}

Eigen::MatrixXcd fractional_matrix(const FractionalOperator& opr, double a,
                                   std::vector<std::string>* warnings) {
    const Eigen::VectorXcd powers = mode_powers(opr, a, warnings);
    return opr.P * powers.asDiagonal() * opr.P_inv;
}

SpectralSignal pmfht_forward(const FractionalOperator& opr, const Eigen::MatrixXd& f,
                             double a, std::vector<std::string> channels) {
    if (f.rows() != opr.size())
        throw ConfigError("fractional forward: signal length " + std::to_string(f.rows()) +
                          " does not match operator size " + std::to_string(opr.size()));
    const Eigen::VectorXcd powers = mode_powers(opr, a, nullptr);

    SpectralSignal sig;
    sig.coeffs = opr.P * (powers.asDiagonal() *
                          (opr.P_inv * f.cast<std::complex<double>>()));
    sig.channels.resize(static_cast<std::size_t>(f.cols()));
    for (Eigen::Index c = 0; c < f.cols(); ++c)
        sig.channels[static_cast<std::size_t>(c)] =
            static_cast<std::size_t>(c) < channels.size() && !channels[static_cast<std::size_t>(c)].empty()
                ? channels[static_cast<std::size_t>(c)]
                : "c" + std::to_string(c);
    sig.order = a;
    sig.basis_id = opr.basis_id;
    return sig;
}

InverseResult pmfht_inverse(const FractionalOperator& opr, const SpectralSignal& sig) {
    if (sig.basis_id != opr.basis_id)
        throw ConfigError("fractional inverse: signal was produced against a different operator");
    if (sig.coeffs.rows() != opr.size())
        throw ConfigError("fractional inverse: coefficient length mismatch");

    InverseResult res;
    const Eigen::VectorXcd powers = mode_powers(opr, -sig.order, &res.warnings);
    res.complex_values = opr.P * (powers.asDiagonal() * (opr.P_inv * sig.coeffs));
    res.values = res.complex_values.real();

    const double total = res.complex_values.norm();
    res.imag_ratio = total > 0.0 ? res.complex_values.imag().norm() / total : 0.0;
    if (res.imag_ratio > 1e-6)
        res.warnings.push_back(
            "inverse at order " + std::to_string(sig.order) + ": imaginary residue ratio " +
            std::to_string(res.imag_ratio) +
            " exceeds 1e-6; the signal did not originate from a real input or lost "
            "conjugate symmetry (complex_values holds the full result)");
    return res;
}

} // namespace pmfht
