#include "pmfht/fractional.hpp"

#include "pmfht/errors.hpp"
#include "pmfht/harmonic.hpp"
#include "pmfht/synth.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

using namespace pmfht;

namespace {

struct FracSetup {
    test::Solved s;
    Eigen::MatrixXd fm;
    FractionalOperator opr;
};

const FracSetup& blob100() {
    static const FracSetup fx = [] {
        FracSetup f;
        f.s = test::solve_cloud(synth::blob(100));
        f.fm = manifold_fourier_matrix(f.s.basis);
        f.opr = decompose_fourier_matrix(f.fm, f.s.basis.id);
        return f;
    }();
    return fx;
}

double rel_frob(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
    return (got - want).norm() / want.norm();
}

bool any_warning_contains(const std::vector<std::string>& warnings, const std::string& text) {
    return std::any_of(warnings.begin(), warnings.end(), [&](const std::string& w) {
        return w.find(text) != std::string::npos;
    });
}

} // namespace

TEST_CASE("decomposition reconstructs the fourier matrix") {
    const FracSetup& fx = blob100();
    const Eigen::MatrixXcd recon = fx.opr.P * fx.opr.J.asDiagonal() * fx.opr.P_inv;
    CHECK((recon - fx.fm.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <=
          1e-7 * fx.fm.cwiseAbs().maxCoeff());
    CHECK(fx.opr.cond_p >= 1.0);
    CHECK(fx.opr.cond_p < 1e10);
    CHECK(fx.opr.basis_id == fx.s.basis.id);
    CHECK(fx.opr.size() == 100);
}

TEST_CASE("fourier eigenvalues are the reciprocals of the basis eigenvalues") {
    const FracSetup& fx = blob100();
    // Independent oracle: eigenvalues of H itself, inverted.
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(
        fx.s.basis.vectors.cast<std::complex<double>>());
    REQUIRE(eig.info() == Eigen::Success);
    std::vector<std::complex<double>> recip(100);
    for (int k = 0; k < 100; ++k)
        recip[static_cast<std::size_t>(k)] = 1.0 / eig.eigenvalues()[k];

    std::vector<bool> used(100, false);
    for (int k = 0; k < 100; ++k) {
        const std::complex<double> want = fx.opr.J[k];
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int m = 0; m < 100; ++m) {
            if (used[static_cast<std::size_t>(m)])
                continue;
            const double d = std::abs(recip[static_cast<std::size_t>(m)] - want);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        REQUIRE(best >= 0);
        used[static_cast<std::size_t>(best)] = true;
        CHECK(best_d <= 1e-7 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("integer orders reproduce the matrix powers") {
    const FracSetup& fx = blob100();
    const Eigen::MatrixXcd fmc = fx.fm.cast<std::complex<double>>();
    const Eigen::Index n = fx.fm.rows();

    CHECK((fractional_matrix(fx.opr, 0.0) - Eigen::MatrixXcd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    CHECK(rel_frob(fractional_matrix(fx.opr, 1.0), fmc) <= 1e-8);
    CHECK(rel_frob(fractional_matrix(fx.opr, 2.0), fmc * fmc) <= 1e-7);
    CHECK(rel_frob(fractional_matrix(fx.opr, 3.0), fmc * fmc * fmc) <= 1e-7);

    const Eigen::MatrixXcd h = fx.s.basis.vectors.cast<std::complex<double>>();
    CHECK(rel_frob(fractional_matrix(fx.opr, -1.0), h) <= 1e-6);
    CHECK(rel_frob(fractional_matrix(fx.opr, -2.0), h * h) <= 1e-6);
}

TEST_CASE("fractional powers compose additively") {
    const FracSetup& fx = blob100();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double a = u(rng), b = u(rng);
        const Eigen::MatrixXcd fa = fractional_matrix(fx.opr, a);
        const Eigen::MatrixXcd fb = fractional_matrix(fx.opr, b);
        const Eigen::MatrixXcd fab = fractional_matrix(fx.opr, a + b);
        CHECK(rel_frob(fa * fb, fab) <= 1e-6);
    }
    // And inverse pairs cancel.
    const Eigen::MatrixXcd left =
        fractional_matrix(fx.opr, -1.3) * fractional_matrix(fx.opr, 1.3);
    CHECK((left - Eigen::MatrixXcd::Identity(100, 100)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("the order parameter acts continuously") {
    const FracSetup& fx = blob100();
    const double h = 1e-6;
    const Eigen::MatrixXcd f1 = fractional_matrix(fx.opr, 0.6);
    const Eigen::MatrixXcd f2 = fractional_matrix(fx.opr, 0.6 + h);
    CHECK(rel_frob(f2, f1) <= 1e-3);
}

TEST_CASE("fractional forward transform") {
    const FracSetup& fx = blob100();
    const Eigen::MatrixXd f = test::random_matrix(100, 3, 500);

    SUBCASE("order zero is the identity") {
        const SpectralSignal sig = pmfht_forward(fx.opr, f, 0.0);
        CHECK((sig.coeffs.real() - f).cwiseAbs().maxCoeff() <= 1e-9 * f.cwiseAbs().maxCoeff());
        CHECK(sig.coeffs.imag().norm() <= 1e-9 * f.norm());
        CHECK(sig.order == 0.0);
        CHECK(sig.basis_id == fx.s.basis.id);
    }
    SUBCASE("order one matches the plain harmonic transform") {
        const SpectralSignal frac = pmfht_forward(fx.opr, f, 1.0);
        const SpectralSignal plain = pmht_forward(fx.s.basis, f);
        CHECK((frac.coeffs - plain.coeffs).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("two half transforms equal one whole") {
        const Eigen::MatrixXcd half = fractional_matrix(fx.opr, 0.5);
        const Eigen::MatrixXcd twice = half * (half * f.cast<std::complex<double>>());
        const SpectralSignal whole = pmfht_forward(fx.opr, f, 1.0);
        CHECK((twice - whole.coeffs).cwiseAbs().maxCoeff() <=
              1e-6 * whole.coeffs.cwiseAbs().maxCoeff());
    }
    SUBCASE("channel names carry through") {
        const SpectralSignal sig = pmfht_forward(fx.opr, f, 0.4, {"x", "y", "z"});
        CHECK(sig.channels == std::vector<std::string>{"x", "y", "z"});
        const SpectralSignal anon = pmfht_forward(fx.opr, f, 0.4);
        CHECK(anon.channels == std::vector<std::string>{"c0", "c1", "c2"});
    }
}

TEST_CASE("fractional inverse transform") {
    const FracSetup& fx = blob100();
    const Eigen::MatrixXd f = test::random_matrix(100, 2, 501);

    SUBCASE("inverse undoes the forward at fractional order") {
        const InverseResult res = pmfht_inverse(fx.opr, pmfht_forward(fx.opr, f, 0.7));
        CHECK((res.values - f).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK(res.imag_ratio <= 1e-6);
        CHECK(!any_warning_contains(res.warnings, "residue"));
    }
    SUBCASE("order one inverse matches the harmonic inverse") {
        const SpectralSignal sig = pmht_forward(fx.s.basis, f);
        SpectralSignal frac = sig;
        frac.basis_id = fx.opr.basis_id;
        const InverseResult res = pmfht_inverse(fx.opr, frac);
        const Eigen::MatrixXd plain = pmht_inverse(fx.s.basis, sig);
        CHECK((res.values - plain).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("non conjugate symmetric coefficients raise the residue warning") {
        SpectralSignal sig;
        sig.coeffs = test::random_matrix(100, 1, 502).cast<std::complex<double>>() +
                     std::complex<double>(0, 1) *
                         test::random_matrix(100, 1, 503).cast<std::complex<double>>();
        sig.channels = {"c0"};
        sig.order = 0.3;
        sig.basis_id = fx.opr.basis_id;
        const InverseResult res = pmfht_inverse(fx.opr, sig);
        CHECK(res.imag_ratio > 1e-6);
        CHECK(any_warning_contains(res.warnings, "exceeds 1e-6"));
        CHECK(res.complex_values.imag().norm() > 0.0);
    }
}

TEST_CASE("branch cut handling on a synthetic spectrum") {
    Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(3, 3);
    fm.diagonal() << -1.0, 2.0, 3.0;
    const FractionalOperator opr = decompose_fourier_matrix(fm, 7);

    REQUIRE(opr.near_branch_cut.size() == 1);

    std::vector<std::string> warnings;
    const Eigen::MatrixXcd half = fractional_matrix(opr, 0.5, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(any_warning_contains(warnings, "negative real axis"));
    // Principal branch: (-1)^{1/2} = i.
    CHECK(std::abs(half(0, 0) - std::complex<double>(0.0, 1.0)) <= 1e-12);
    CHECK(std::abs(half(1, 1) - std::sqrt(2.0)) <= 1e-12);

    warnings.clear();
    (void)fractional_matrix(opr, 2.0, &warnings);
    CHECK(warnings.empty()); // integer orders never warn

    // Exact additivity across the cut because each log is taken once.
    const Eigen::MatrixXcd a = fractional_matrix(opr, 0.3);
    const Eigen::MatrixXcd b = fractional_matrix(opr, 0.7);
    CHECK(rel_frob(a * b, fractional_matrix(opr, 1.0)) <= 1e-12);
}

TEST_CASE("identity matrix decomposes trivially") {
    const FractionalOperator opr =
        decompose_fourier_matrix(Eigen::MatrixXd::Identity(20, 20), 1);
    CHECK(opr.near_branch_cut.empty());
    CHECK((fractional_matrix(opr, 0.37) - Eigen::MatrixXcd::Identity(20, 20))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("decomposition rejects hopeless inputs") {
    const FracSetup& fx = blob100();

    SUBCASE("defectiveness threshold") {
        CHECK_THROWS_WITH_AS(decompose_fourier_matrix(fx.fm, 0, 1.0),
                             doctest::Contains("defective"), NumericError);
    }
    SUBCASE("singular matrix") {
        Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(3, 3);
        fm.diagonal() << 0.0, 1.0, 2.0;
        CHECK_THROWS_WITH_AS(decompose_fourier_matrix(fm, 0),
                             doctest::Contains("invertible"), NumericError);
    }
    SUBCASE("non square input") {
        CHECK_THROWS_AS(decompose_fourier_matrix(Eigen::MatrixXd::Zero(3, 4), 0), ConfigError);
    }
    SUBCASE("operator and signal identity must agree") {
        const FractionalOperator other = decompose_fourier_matrix(fx.fm, fx.s.basis.id + 9001);
        const SpectralSignal sig = pmfht_forward(fx.opr, test::random_vector(100, 504), 0.5);
        CHECK_THROWS_AS(pmfht_inverse(other, sig), ConfigError);
    }
    SUBCASE("length mismatches") {
        CHECK_THROWS_AS(pmfht_forward(fx.opr, test::random_vector(10, 505), 0.5), ConfigError);
        SpectralSignal sig = pmfht_forward(fx.opr, test::random_vector(100, 506), 0.5);
        sig.coeffs.conservativeResize(10, 1);
        CHECK_THROWS_AS(pmfht_inverse(fx.opr, sig), ConfigError);
    }
    SUBCASE("non finite order") {
        CHECK_THROWS_AS(
            pmfht_forward(fx.opr, test::random_vector(100, 507),
                          std::numeric_limits<double>::quiet_NaN()),
            ConfigError);
    }
}
