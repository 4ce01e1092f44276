#pragma once

#include "pmfht/lbo.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace pmfht {

// Point-based manifold harmonic basis: columns of `vectors` solve
// Q H = -lambda B H with H^T B H = I, lambdas ascending and nonnegative.
struct HarmonicBasis {
    Eigen::VectorXd lambdas;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd mass;        // diagonal of the B used to solve
    double raw_lambda_min = 0.0; // most negative eigenvalue before clamping
    std::uint64_t id = 0;        // identity token; transforms check it

    Eigen::Index size() const { return mass.size(); }
};

// Coefficients of one or more signals in a harmonic (or fractional) domain.
// Column c holds channel c; `order` is the transform order that produced it.
struct SpectralSignal {
    Eigen::MatrixXcd coeffs;
    std::vector<std::string> channels;
    double order = 1.0;
    std::uint64_t basis_id = 0;
};

// Full dense eigendecomposition through the symmetrized form
// S = B^{-1/2} Q B^{-1/2}. Sizes above dense_limit are rejected; downsample
// the cloud instead.
HarmonicBasis solve_harmonic_basis(const LboPair& pair, Eigen::Index dense_limit = 4000);

// Forward harmonic transform, coeffs = H^T B f per channel (order 1).
// Channel names are optional; missing names are filled as c0, c1, ...
SpectralSignal pmht_forward(const HarmonicBasis& basis, const Eigen::MatrixXd& f,
                            std::vector<std::string> channels = {});

// Inverse harmonic transform, f = H coeffs. Requires an order-1 signal
// produced against the same basis.
Eigen::MatrixXd pmht_inverse(const HarmonicBasis& basis, const SpectralSignal& sig);

// Manifold Fourier matrix F = H^T B with inverse H; the product F H is
// verified against the identity before returning.
Eigen::MatrixXd manifold_fourier_matrix(const HarmonicBasis& basis);

} // namespace pmfht
