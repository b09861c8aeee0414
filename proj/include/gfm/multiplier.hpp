#pragma once

// Fourier multipliers T_sigma f = sum_xi d_xi Tr(xi(x) sigma(xi) fhat(xi)),
// their dyadic window kernels and empirical operator-norm probes.

#include "gfm/spaces.hpp"
#include "gfm/symbol.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gfm {

/// Per-irrep left product sigma(xi) fhat(xi).
FourierCoefficients apply_multiplier(const Symbol& sigma, const FourierCoefficients& coeffs);

/// Right-convolution kernel of T_sigma psi_ell(B): coefficients sigma(xi) psi_ell(<xi>).
struct KernelWindow {
    int ell = 0;
    FourierCoefficients coeffs;
};

KernelWindow window_kernel(const Symbol& sigma, const LPPartition& partition, int ell);

/// Quadrature of |k(z^{-1} x) - k(x)| over grid points with |x| > 4 c |z|, the
/// kernel evaluated by exact series summation. 0 when 4 c |z| >= diameter.
double kernel_difference_integral(const KernelWindow& kernel, const GroupPoint& z, double c, const GridPtr& grid);

/// sup_xi ||sigma(xi)||_op.
double exact_l2_operator_norm(const Symbol& sigma);

enum class EnsembleType { GaussianCoefficients, DirichletKernels, TranslatedWindows, Directed, FocusedWindows };

/// "gaussian-coefficients", "dirichlet-kernels", "translated-windows", "directed",
/// "focused-windows".
std::string ensemble_name(EnsembleType t);
EnsembleType ensemble_from_name(const std::string& name);

struct EnsembleConfig {
    std::vector<EnsembleType> types{EnsembleType::GaussianCoefficients};
    int count = 8;  ///< members per type
    std::uint64_t seed = 0;
};

/// Deterministic test functions on a slice. Member k of each type draws from
/// its own stream seeded by (seed, type, k). The directed members put a rank-one
/// block along the top singular direction of sigma at its largest irreps. The
/// focused members are sigma(xi)^* times a translated window, so T_sigma maps
/// them back onto the concentrated window when sigma is unitary.
std::vector<FourierCoefficients> build_ensemble(const EnsembleConfig& cfg, const Symbol& sigma,
                                                const LPPartition& partition);

struct SweepRow {
    double cutoff = 0.0;
    double max_ratio = 0.0;  ///< empirical lower bound of the operator norm
    int argmax_member = -1;
};

struct BoundednessSweep {
    std::string group;
    std::string symbol;
    NormSpec spec;
    EnsembleConfig ensemble;
    std::vector<SweepRow> rows;
};

/// For each cutoff: max over the ensemble of ||T f|| / ||f|| in F^r_{p,q}; for
/// p = 1 the numerator is the weak norm. One result per spec, sharing the
/// Littlewood-Paley pieces.
std::vector<BoundednessSweep> boundedness_sweep(const GroupDescriptor& g, const ScalarProfile& profile,
                                                const std::vector<NormSpec>& specs,
                                                const std::vector<double>& cutoffs, const EnsembleConfig& ensemble,
                                                double oversample = 1.0);

/// Largest relative change max/min - 1 of the row ratios.
double sweep_variation(const BoundednessSweep& s);
bool sweep_strictly_increasing(const BoundednessSweep& s);

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gfm
