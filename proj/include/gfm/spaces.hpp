#pragma once

// Dyadic Littlewood-Paley partition in the Bessel-potential eigenvalue <xi>,
// quadrature L^p norms and (weak) Triebel-Lizorkin norms of band-limited
// functions.

#include "gfm/fourier.hpp"

#include <vector>

namespace gfm {

/// eta(l) = phi(l) - phi(2l) with phi the exp(-1/t) smooth step (1 on l <= 1,
/// 0 on l >= 2). psi_0 = phi and psi_j(l) = eta(2^-j l) for j >= 1, so the
/// pieces telescope to 1 on [1, inf).
class LPPartition {
public:
    static double phi(double lambda);
    double eta(double lambda) const;
    double psi(int ell, double lambda) const;

    /// Largest window index with a nonzero piece on {<xi> <= cutoff}.
    int max_index(double cutoff) const;

    /// H^k(R) norm of eta for k in {0, 1, 2}.
    double eta_sobolev_norm(int k) const;
};

LPPartition build_partition();

/// Per-irrep multiplication by psi_ell(<xi>).
FourierCoefficients lp_project(const FourierCoefficients& coeffs, const LPPartition& partition, int ell);

/// Quadrature (sum w |f|^p)^{1/p}; p = inf gives the max.
double lebesgue_norm(const GridFunction& f, double p);

/// Smoothness r, integrability p and summability q. p = 1 is accepted for the
/// weak norm only.
struct NormSpec {
    double r = 0.0;
    double p = 2.0;
    double q = 2.0;

    /// Throws ConfigError outside 1 < q < inf and 1 <= p < inf.
    void validate() const;
};

/// |psi_ell(B) f| on a grid for every window ell = 0..max_index, computed once
/// and aggregated for any number of norm specs.
class LPDecomposition {
public:
    LPDecomposition(const FourierCoefficients& f, const LPPartition& partition, GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    int pieces() const { return static_cast<int>(abs_pieces_.size()); }

    /// g(x) = (sum_ell 2^{ell r q} |psi_ell(B) f(x)|^q)^{1/q} at every grid point.
    std::vector<double> aggregate(double r, double q) const;
    double norm(const NormSpec& spec) const;
    double weak_norm(const NormSpec& spec) const;

private:
    GridPtr grid_;
    std::vector<std::vector<double>> abs_pieces_;
};

double triebel_lizorkin_norm(const FourierCoefficients& coeffs, const NormSpec& spec,
                             const LPPartition& partition, const GridPtr& grid);

/// sup_t t |{g > t}| with t running over the sampled values (left limits).
double weak_tl_norm(const FourierCoefficients& coeffs, const NormSpec& spec,
                    const LPPartition& partition, const GridPtr& grid);

/// Weak L^1-type quasi-norm of nonnegative samples g with quadrature weights w.
double weak_level_norm(const std::vector<double>& g, const std::vector<double>& w);

}  // namespace gfm
