#include "gfm/spaces.hpp"

#include "gfm/errors.hpp"

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gfm {
namespace {

double h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double LPPartition::phi(double lambda) {
    if (lambda <= 1.0) return 1.0;
    if (lambda >= 2.0) return 0.0;
    const double a = h(2.0 - lambda), b = h(lambda - 1.0);
    return a / (a + b);
}

double LPPartition::eta(double lambda) const { return phi(lambda) - phi(2.0 * lambda); }

double LPPartition::psi(int ell, double lambda) const {
    if (ell < 0) return 0.0;
    if (ell == 0) return phi(lambda);
    return eta(std::ldexp(lambda, -ell));
}

int LPPartition::max_index(double cutoff) const {
    // psi_ell vanishes below 2^{ell-1}
    int ell = 0;
    while (std::ldexp(1.0, ell) < cutoff) ++ell;
    return ell;
}

double LPPartition::eta_sobolev_norm(int k) const {
    if (k < 0 || k > 2) throw PreconditionError("eta_sobolev_norm supports k in {0, 1, 2}");
    using boost::math::differentiation::finite_difference_derivative;
    using boost::math::quadrature::gauss_kronrod;
    auto f0 = [this](double x) { return eta(x); };
    auto f1 = [&](double x) { return finite_difference_derivative<decltype(f0), double, 8>(f0, x); };
    auto f2 = [&](double x) { return finite_difference_derivative<decltype(f1), double, 8>(f1, x); };
    // eta is smooth across the knots at 1/2, 1 and 2; integrate piecewise
    const std::array<double, 5> knots{0.5, 0.75, 1.0, 1.5, 2.0};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        total += gauss_kronrod<double, 61>::integrate([&](double x) { return f0(x) * f0(x); }, a, b, 10, 1e-12);
        if (k >= 1) total += gauss_kronrod<double, 61>::integrate([&](double x) { return f1(x) * f1(x); }, a, b, 10, 1e-10);
        if (k >= 2) total += gauss_kronrod<double, 61>::integrate([&](double x) { return f2(x) * f2(x); }, a, b, 10, 1e-8);
    }
    return std::sqrt(total);
}

LPPartition build_partition() { return LPPartition{}; }

FourierCoefficients lp_project(const FourierCoefficients& coeffs, const LPPartition& partition, int ell) {
    if (ell < 0) throw PreconditionError("window index must be nonnegative");
    FourierCoefficients out = coeffs;
    const DualSlice& dual = coeffs.slice();
    for (std::size_t i = 0; i < dual.size(); ++i) out.block(i) *= partition.psi(ell, dual[i].bracket);
    return out;
}

double lebesgue_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw PreconditionError("lebesgue_norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cd& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.grid->weights[i] * std::pow(std::abs(f.values[i]), p);
    return std::pow(acc, 1.0 / p);
}

void NormSpec::validate() const {
    if (!std::isfinite(r)) throw ConfigError("norm spec: r must be finite");
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("norm spec: p must lie in [1, inf)");
    if (!(q > 1.0) || !std::isfinite(q)) throw ConfigError("norm spec: q must lie in (1, inf)");
}

LPDecomposition::LPDecomposition(const FourierCoefficients& f, const LPPartition& partition, GridPtr grid)
    : grid_(std::move(grid)) {
    const int top = partition.max_index(f.slice().cutoff());
    for (int ell = 0; ell <= top; ++ell) {
        const auto piece = synthesize(lp_project(f, partition, ell), grid_);
        std::vector<double> a(piece.values.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(piece.values[i]);
        abs_pieces_.push_back(std::move(a));
    }
}

std::vector<double> LPDecomposition::aggregate(double r, double q) const {
    const std::size_t n = grid_->size();
    std::vector<double> acc(n, 0.0);
    for (std::size_t ell = 0; ell < abs_pieces_.size(); ++ell) {
        const double scale = std::exp2(static_cast<double>(ell) * r);
        const auto& a = abs_pieces_[ell];
        for (std::size_t i = 0; i < n; ++i) acc[i] += std::pow(scale * a[i], q);
    }
    for (double& v : acc) v = std::pow(v, 1.0 / q);
    return acc;
}

double LPDecomposition::norm(const NormSpec& spec) const {
    spec.validate();
    const auto g = aggregate(spec.r, spec.q);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += grid_->weights[i] * std::pow(g[i], spec.p);
    return std::pow(acc, 1.0 / spec.p);
}

double LPDecomposition::weak_norm(const NormSpec& spec) const {
    spec.validate();
    if (spec.p != 1.0) throw PreconditionError("the weak norm is defined for p = 1");
    return weak_level_norm(aggregate(spec.r, spec.q), grid_->weights);
}

double weak_level_norm(const std::vector<double>& g, const std::vector<double>& w) {
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
    double best = 0.0, mass = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double level = g[order[i]];
        // ties share one level set
        while (i < order.size() && g[order[i]] == level) mass += w[order[i++]];
        best = std::max(best, level * mass);
    }
    return best;
}

double triebel_lizorkin_norm(const FourierCoefficients& coeffs, const NormSpec& spec,
                             const LPPartition& partition, const GridPtr& grid) {
    spec.validate();
    return LPDecomposition(coeffs, partition, grid).norm(spec);
}

double weak_tl_norm(const FourierCoefficients& coeffs, const NormSpec& spec, const LPPartition& partition,
                    const GridPtr& grid) {
    return LPDecomposition(coeffs, partition, grid).weak_norm(spec);
}

}  // namespace gfm
