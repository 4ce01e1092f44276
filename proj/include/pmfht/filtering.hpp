#pragma once

#include "pmfht/fractional.hpp"
#include "pmfht/harmonic.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace pmfht {

enum class FilterKind { lowpass, highpass, bandpass };

// Mode-index mask specification. Cutoffs index modes in the
// eigenvalue-ascending ordering; passbands are inclusive:
//   lowpass  keeps modes <= cutoff_hi,
//   highpass keeps modes >= cutoff_lo,
//   bandpass keeps modes in [cutoff_lo, cutoff_hi].
// rolloff_width > 0 replaces the ideal edge with a raised-cosine ramp of
// that many modes outside the passband.
struct FilterSpec {
    FilterKind kind = FilterKind::lowpass;
    int cutoff_lo = 0;
    int cutoff_hi = 0;
    double order = 1.0;
    double gain_passband = 1.0;
    double gain_stopband = 0.0;
    double rolloff_width = 0.0;
};

// Throws ConfigError unless 0 <= cutoff_lo <= cutoff_hi < n and all gains,
// order, and rolloff are finite (rolloff nonnegative).
void validate_filter(const FilterSpec& spec, Eigen::Index n);

// Per-mode gain vector of length n realizing the spec.
Eigen::VectorXd filter_mask(const FilterSpec& spec, Eigen::Index n);

struct FilterResult {
    Eigen::MatrixXd values;
    double imag_ratio = 0.0;
    std::vector<std::string> warnings;
};

// Fractional-domain filtering: g = Re[ F^(-a) (mask . (F^(a) f)) ] per
// channel. The operator must come from the given basis.
FilterResult apply_filter(const FractionalOperator& opr, const HarmonicBasis& basis,
                          const Eigen::MatrixXd& f, const FilterSpec& spec);

// Dirichlet-type energy sum_i lambda_i |<f, H_i>_B|^2.
double smoothness_energy(const HarmonicBasis& basis, const Eigen::VectorXd& f);

} // namespace pmfht
