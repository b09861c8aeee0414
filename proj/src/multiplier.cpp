#include "gfm/multiplier.hpp"

#include "gfm/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace gfm {
namespace {

constexpr std::array<EnsembleType, 5> kAllTypes{EnsembleType::GaussianCoefficients, EnsembleType::DirichletKernels,
                                                EnsembleType::TranslatedWindows, EnsembleType::Directed,
                                                EnsembleType::FocusedWindows};

std::mt19937_64 member_stream(std::uint64_t seed, EnsembleType type, int k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(type), static_cast<std::uint32_t>(k)};
    return std::mt19937_64(seq);
}

GroupPoint haar_point(const GroupDescriptor& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GroupPoint p;
    if (g.is_su2()) {
        const double a = 2.0 * std::numbers::pi * u(rng);
        const double b = std::acos(1.0 - 2.0 * u(rng));
        const double c = 4.0 * std::numbers::pi * u(rng);
        p.c = {a, b, c};
        return canonicalize(g, p);
    }
    for (int j = 0; j < g.dim; ++j) p.c[j] = u(rng);
    return p;
}

FourierCoefficients spectral_indicator(const DualPtr& dual, double radius) {
    FourierCoefficients f(dual);
    for (std::size_t i = 0; i < dual->size(); ++i)
        if ((*dual)[i].bracket <= radius) f.block(i).setIdentity();
    return f;
}

FourierCoefficients directed_member(const Symbol& sigma, int k) {
    const DualSlice& dual = sigma.slice();
    std::vector<double> norms(dual.size());
    for (std::size_t i = 0; i < dual.size(); ++i) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(sigma.block(i));
        norms[i] = svd.singularValues()(0);
    }
    std::vector<std::size_t> order(dual.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
    const std::size_t i = order[static_cast<std::size_t>(k) % order.size()];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sigma.block(i), Eigen::ComputeFullV);
    FourierCoefficients f(sigma.dual());
    f.block(i).col(0) = svd.matrixV().col(0);
    return f;
}

}  // namespace

FourierCoefficients apply_multiplier(const Symbol& sigma, const FourierCoefficients& coeffs) {
    if (!sigma.same_slice(coeffs)) throw PreconditionError("symbol and coefficients live on different dual slices");
    FourierCoefficients out(coeffs.dual());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.block(i).noalias() = sigma.block(i) * coeffs.block(i);
    return out;
}

KernelWindow window_kernel(const Symbol& sigma, const LPPartition& partition, int ell) {
    if (ell < 0) throw PreconditionError("window index must be nonnegative");
    return {ell, lp_project(sigma.as_coefficients(), partition, ell)};
}

double kernel_difference_integral(const KernelWindow& kernel, const GroupPoint& z, double c, const GridPtr& grid) {
    const GroupDescriptor& g = grid->group;
    if (!(c > 0.0)) throw PreconditionError("c must be positive");
    const double zn = geometric_weights(g, z).distance;
    if (!(zn > 0.0)) throw PreconditionError("z must differ from the identity");
    const double radius = 4.0 * c * zn;
    if (radius >= diameter(g)) return 0.0;

    const GroupPoint zinv = inverse(g, z);
    const auto base = synthesize(kernel.coeffs, grid);
    std::vector<std::size_t> idx;
    std::vector<GroupPoint> moved;
    for (std::size_t p = 0; p < grid->size(); ++p) {
        if (geometric_weights(g, grid->points[p]).distance <= radius) continue;
        idx.push_back(p);
        moved.push_back(multiply(g, zinv, grid->points[p]));
    }
    const auto shifted = inverse_evaluate(kernel.coeffs, moved);
    double acc = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) acc += grid->weights[idx[k]] * std::abs(shifted[k] - base.values[idx[k]]);
    return acc;
}

double exact_l2_operator_norm(const Symbol& sigma) { return sigma.linf_norm(); }

std::string ensemble_name(EnsembleType t) {
    switch (t) {
        case EnsembleType::GaussianCoefficients: return "gaussian-coefficients";
        case EnsembleType::DirichletKernels: return "dirichlet-kernels";
        case EnsembleType::TranslatedWindows: return "translated-windows";
        case EnsembleType::Directed: return "directed";
        case EnsembleType::FocusedWindows: return "focused-windows";
    }
    return "?";
}

EnsembleType ensemble_from_name(const std::string& name) {
    for (auto t : kAllTypes)
        if (ensemble_name(t) == name) return t;
    throw ConfigError("unknown ensemble type \"" + name + "\"");
}

std::vector<FourierCoefficients> build_ensemble(const EnsembleConfig& cfg, const Symbol& sigma,
                                                const LPPartition& partition) {
    if (cfg.count < 1) throw ConfigError("ensemble count must be positive");
    const DualPtr& dual = sigma.dual();
    const GroupDescriptor& g = dual->group();
    std::vector<FourierCoefficients> out;
    for (auto type : cfg.types)
        for (int k = 0; k < cfg.count; ++k) {
            auto rng = member_stream(cfg.seed, type, k);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            switch (type) {
                case EnsembleType::GaussianCoefficients: {
                    std::normal_distribution<double> n01;
                    FourierCoefficients f(dual);
                    for (auto& v : f.data()) v = {n01(rng), n01(rng)};
                    out.push_back(std::move(f));
                    break;
                }
                case EnsembleType::DirichletKernels: {
                    // log-uniform spectral radius, random center
                    const double radius = std::exp(u(rng) * std::log(dual->cutoff()));
                    out.push_back(left_translate(spectral_indicator(dual, radius), haar_point(g, rng)));
                    break;
                }
                case EnsembleType::TranslatedWindows:
                case EnsembleType::FocusedWindows: {
                    const int top = partition.max_index(dual->cutoff());
                    const int ell = std::min(top, static_cast<int>(u(rng) * (top + 1)));
                    FourierCoefficients f(dual);
                    for (std::size_t i = 0; i < dual->size(); ++i) {
                        const double w = partition.psi(ell, (*dual)[i].bracket);
                        if (type == EnsembleType::FocusedWindows)
                            f.block(i) = sigma.block(i).adjoint() * w;
                        else
                            f.block(i).setIdentity() *= w;
                    }
                    out.push_back(left_translate(f, haar_point(g, rng)));
                    break;
                }
                case EnsembleType::Directed: out.push_back(directed_member(sigma, k)); break;
            }
        }
    return out;
}

std::vector<BoundednessSweep> boundedness_sweep(const GroupDescriptor& g, const ScalarProfile& profile,
                                                const std::vector<NormSpec>& specs,
                                                const std::vector<double>& cutoffs, const EnsembleConfig& ensemble,
                                                double oversample) {
    if (specs.empty()) throw PreconditionError("boundedness_sweep needs at least one norm spec");
    for (const auto& s : specs) s.validate();
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (!(cutoffs[i] > cutoffs[i - 1])) throw ConfigError("sweep cutoffs must be strictly ascending");
    const LPPartition partition = build_partition();
    std::vector<BoundednessSweep> out(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) out[s] = {group_name(g), profile.name(), specs[s], ensemble, {}};

    for (double cutoff : cutoffs) {
        const auto dual = enumerate_dual(g, cutoff);
        const Symbol sigma = build_spectral_symbol(profile, dual);
        const auto grid = make_grid(g, dual->max_label(), oversample);
        const auto members = build_ensemble(ensemble, sigma, partition);
        std::vector<SweepRow> rows(specs.size(), SweepRow{cutoff, 0.0, -1});
        for (std::size_t m = 0; m < members.size(); ++m) {
            const LPDecomposition df(members[m], partition, grid);
            const LPDecomposition dt(apply_multiplier(sigma, members[m]), partition, grid);
            for (std::size_t s = 0; s < specs.size(); ++s) {
                const double den = df.norm(specs[s]);
                if (!(den > 0.0)) continue;
                const double num = specs[s].p == 1.0 ? dt.weak_norm(specs[s]) : dt.norm(specs[s]);
                const double ratio = num / den;
                if (ratio > rows[s].max_ratio) {
                    rows[s].max_ratio = ratio;
                    rows[s].argmax_member = static_cast<int>(m);
                }
            }
        }
        for (std::size_t s = 0; s < specs.size(); ++s) out[s].rows.push_back(rows[s]);
    }
    return out;
}

double sweep_variation(const BoundednessSweep& s) {
    if (s.rows.empty()) return 0.0;
    double lo = s.rows.front().max_ratio, hi = lo;
    for (const auto& r : s.rows) {
        lo = std::min(lo, r.max_ratio);
        hi = std::max(hi, r.max_ratio);
    }
    return hi / lo - 1.0;
}

bool sweep_strictly_increasing(const BoundednessSweep& s) {
    for (std::size_t i = 1; i < s.rows.size(); ++i)
        if (!(s.rows[i].max_ratio > s.rows[i - 1].max_ratio)) return false;
    return !s.rows.empty();
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw PreconditionError("slope fit needs two or more matching points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace gfm
