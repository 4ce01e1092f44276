#include "pmfht/filtering.hpp"
#include "pmfht/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pmfht {

void validate_filter(const FilterSpec& spec, Eigen::Index n) {
    if (spec.cutoff_lo < 0 || spec.cutoff_hi < spec.cutoff_lo || spec.cutoff_hi >= n)
        throw ConfigError("filter: cutoffs must satisfy 0 <= lo <= hi < " + std::to_string(n) +
                          ", got lo=" + std::to_string(spec.cutoff_lo) +
                          " hi=" + std::to_string(spec.cutoff_hi));
    if (!std::isfinite(spec.gain_passband) || !std::isfinite(spec.gain_stopband))
        throw ConfigError("filter: gains must be finite");
    if (!std::isfinite(spec.order))
        throw ConfigError("filter: order must be finite");
    if (!std::isfinite(spec.rolloff_width) || spec.rolloff_width < 0.0)
        throw ConfigError("filter: rolloff width must be nonnegative");
}

Eigen::VectorXd filter_mask(const FilterSpec& spec, Eigen::Index n) {
    validate_filter(spec, n);

    // ramp(d) interpolates passband -> stopband over d in [0, width] modes
    // outside the passband edge; with width 0 the mask is ideal.
    const auto ramp = [&](double outside) {
        if (outside <= 0.0)
            return spec.gain_passband;
        if (spec.rolloff_width <= 0.0 || outside >= spec.rolloff_width)
            return spec.gain_stopband;
        const double c = 0.5 * (1.0 + std::cos(std::numbers::pi * outside / spec.rolloff_width));
        return spec.gain_stopband + (spec.gain_passband - spec.gain_stopband) * c;
    };

    Eigen::VectorXd mask(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        double outside = 0.0;
        switch (spec.kind) {
        case FilterKind::lowpass:
            outside = static_cast<double>(m - spec.cutoff_hi);
            break;
        case FilterKind::highpass:
            outside = static_cast<double>(spec.cutoff_lo - m);
            break;
        case FilterKind::bandpass:
            outside = std::max(static_cast<double>(spec.cutoff_lo - m),
                               static_cast<double>(m - spec.cutoff_hi));
            break;
        }
        mask[m] = ramp(outside);
    }
    return mask;
}

FilterResult apply_filter(const FractionalOperator& opr, const HarmonicBasis& basis,
                          const Eigen::MatrixXd& f, const FilterSpec& spec) {
    if (opr.basis_id != basis.id)
        throw ConfigError("filter: operator and basis come from different solves");
    if (f.rows() != basis.size())
        throw ConfigError("filter: signal length " + std::to_string(f.rows()) +
                          " does not match basis size " + std::to_string(basis.size()));
    const Eigen::VectorXd mask = filter_mask(spec, basis.size());

    SpectralSignal hat = pmfht_forward(opr, f, spec.order);
    hat.coeffs = mask.cast<std::complex<double>>().asDiagonal() * hat.coeffs;
    InverseResult inv = pmfht_inverse(opr, hat);

    FilterResult res;
    res.values = std::move(inv.values);
    res.imag_ratio = inv.imag_ratio;
    res.warnings = std::move(inv.warnings);
    return res;
}

double smoothness_energy(const HarmonicBasis& basis, const Eigen::VectorXd& f) {
    if (f.size() != basis.size())
        throw ConfigError("smoothness energy: signal length mismatch");
    const Eigen::VectorXd coeffs = basis.vectors.transpose() * basis.mass.cwiseProduct(f);
    return basis.lambdas.dot(coeffs.cwiseAbs2());
}

} // namespace pmfht
