#include "pmfht/lbo.hpp"
#include "pmfht/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace pmfht {

LboPair assemble_lbo(const PointCloud& cloud, const NeighborIndex& index,
                     const Eigen::VectorXd& weights, double t, double delta) {
    const Eigen::Index n = cloud.size();
    if (t <= 0.0 || !std::isfinite(t))
        throw ConfigError("lbo assembly: heat parameter t must be positive, got " +
                          std::to_string(t));
    if (delta <= 0.0 || !std::isfinite(delta))
        throw ConfigError("lbo assembly: neighborhood radius delta must be positive");
    if (weights.size() != n)
        throw ConfigError("lbo assembly: " + std::to_string(weights.size()) +
                          " weights for " + std::to_string(n) + " points");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(weights[i]) || weights[i] <= 0.0)
            throw InputError("lbo assembly: weight " + std::to_string(i) +
                             " is not a positive finite area");

    const double prefactor = 1.0 / (4.0 * std::numbers::pi * t * t);
    const double inv_4t = 1.0 / (4.0 * t);

    // One evaluation per unordered pair keeps Q = Q^T exact.
    std::vector<Eigen::Triplet<double>> entries;
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector3d p = cloud.point(i);
        for (int j : index.radius_query(p, delta)) {
            if (j <= i)
                continue;
            const double d2 = (cloud.point(j) - p).squaredNorm();
            const double q = weights[i] * weights[j] * prefactor * std::exp(-d2 * inv_4t);
            entries.emplace_back(static_cast<int>(i), j, q);
            entries.emplace_back(j, static_cast<int>(i), q);
            row_sum[i] += q;
            row_sum[j] += q;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        entries.emplace_back(static_cast<int>(i), static_cast<int>(i), -row_sum[i]);

    LboPair pair;
    pair.Q.resize(n, n);
    pair.Q.setFromTriplets(entries.begin(), entries.end());
    pair.mass = weights;
    pair.t = t;
    pair.delta = delta;
    return pair;
}

Eigen::VectorXd apply_lbo(const LboPair& pair, const Eigen::VectorXd& f) {
    if (f.size() != pair.size())
        throw ConfigError("lbo apply: signal length " + std::to_string(f.size()) +
                          " does not match operator size " + std::to_string(pair.size()));
    return (pair.Q * f).cwiseQuotient(pair.mass);
}

double default_t(double epsilon, double exponent_margin) {
    if (epsilon <= 0.0 || !std::isfinite(epsilon))
        throw ConfigError("kernel bandwidth: epsilon must be positive");
    if (exponent_margin <= 0.0 || exponent_margin > 0.5)
        throw ConfigError("kernel bandwidth: exponent margin must lie in (0, 0.5]");
    return std::pow(epsilon, 0.5 + exponent_margin);
}

} // namespace pmfht
