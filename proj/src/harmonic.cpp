#include "pmfht/harmonic.hpp"
#include "pmfht/errors.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <string>
#include <utility>

namespace pmfht {

namespace {

std::uint64_t next_basis_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

std::vector<std::string> fill_channel_names(std::vector<std::string> names, Eigen::Index count) {
    names.resize(static_cast<std::size_t>(count));
    for (Eigen::Index c = 0; c < count; ++c)
        if (names[static_cast<std::size_t>(c)].empty())
            names[static_cast<std::size_t>(c)] = "c" + std::to_string(c);
    return names;
}

} // namespace

HarmonicBasis solve_harmonic_basis(const LboPair& pair, Eigen::Index dense_limit) {
    const Eigen::Index n = pair.size();
    if (n < 2)
        throw ConfigError("harmonic basis: need at least 2 points");
    if (n > dense_limit)
        throw ConfigError("harmonic basis: " + std::to_string(n) +
                          " points exceed the dense eigensolve limit " +
                          std::to_string(dense_limit) + "; downsample the cloud first");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(pair.mass[i] > 0.0) || !std::isfinite(pair.mass[i]))
            throw InputError("harmonic basis: mass entry " + std::to_string(i) +
                             " is not positive");

    // Symmetrize: S = B^{-1/2} Q B^{-1/2} shares eigenvalues with B^{-1} Q,
    // and its orthonormal eigenvectors map back through B^{-1/2}.
    const Eigen::VectorXd inv_sqrt_mass = pair.mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = Eigen::MatrixXd(pair.Q);
    S = inv_sqrt_mass.asDiagonal() * S * inv_sqrt_mass.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    if (eig.info() != Eigen::Success)
        throw NumericError("harmonic basis: symmetric eigensolver did not converge");

    // Eigen returns mu ascending; lambdas = -mu are produced ascending by
    // walking mu from the top down.
    HarmonicBasis basis;
    basis.lambdas.resize(n);
    basis.vectors.resize(n, n);
    basis.mass = pair.mass;
    basis.id = next_basis_id();
    for (Eigen::Index k = 0; k < n; ++k) {
        basis.lambdas[k] = -eig.eigenvalues()[n - 1 - k];
        basis.vectors.col(k) = inv_sqrt_mass.cwiseProduct(eig.eigenvectors().col(n - 1 - k));
    }

    basis.raw_lambda_min = basis.lambdas.minCoeff();
    const double scale = std::abs(basis.lambdas[n - 1]);
    if (basis.raw_lambda_min < -1e-8 * scale)
        throw NumericError("harmonic basis: spectrum has a negative eigenvalue " +
                           std::to_string(basis.raw_lambda_min) +
                           " beyond tolerance; operator is not negative semidefinite");
    basis.lambdas = basis.lambdas.cwiseMax(0.0);

    // Sign convention: the largest-magnitude entry of each column positive.
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index arg = 0;
        basis.vectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (basis.vectors(arg, k) < 0.0)
            basis.vectors.col(k) = -basis.vectors.col(k);
    }
    return basis;
}

SpectralSignal pmht_forward(const HarmonicBasis& basis, const Eigen::MatrixXd& f,
                            std::vector<std::string> channels) {
    if (f.rows() != basis.size())
        throw ConfigError("harmonic forward: signal length " + std::to_string(f.rows()) +
                          " does not match basis size " + std::to_string(basis.size()));
    SpectralSignal sig;
    sig.coeffs = (basis.vectors.transpose() * (basis.mass.asDiagonal() * f))
                     .cast<std::complex<double>>();
    sig.channels = fill_channel_names(std::move(channels), f.cols());
    sig.order = 1.0;
    sig.basis_id = basis.id;
    return sig;
}

Eigen::MatrixXd pmht_inverse(const HarmonicBasis& basis, const SpectralSignal& sig) {
    if (sig.basis_id != basis.id)
        throw ConfigError("harmonic inverse: signal was produced against a different basis");
    if (sig.order != 1.0)
        throw ConfigError("harmonic inverse: signal has order " + std::to_string(sig.order) +
                          ", expected 1");
    if (sig.coeffs.rows() != basis.size())
        throw ConfigError("harmonic inverse: coefficient length mismatch");
    return (basis.vectors * sig.coeffs).real();
}

Eigen::MatrixXd manifold_fourier_matrix(const HarmonicBasis& basis) {
    Eigen::MatrixXd fm = basis.vectors.transpose() * basis.mass.asDiagonal();
    const double dev =
        (fm * basis.vectors - Eigen::MatrixXd::Identity(basis.size(), basis.size()))
            .cwiseAbs()
            .maxCoeff();
    if (dev > 1e-8)
        throw NumericError("fourier matrix: F*H deviates from the identity by " +
                           std::to_string(dev));
    return fm;
}

} // namespace pmfht
