#include "gfm/group.hpp"

#include "gfm/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gfm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
// Below this modulus an entry of the fundamental matrix is treated as zero
// when recovering Euler angles.
constexpr double kGimbalEps = 1e-14;

double wrap(double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

void check_group(const GroupDescriptor& g) {
    if (g.is_torus() && (g.dim < 1 || g.dim > kMaxTorusDim))
        throw ConfigError("torus dimension must be in [1, 3], got " + std::to_string(g.dim));
    if (g.is_su2() && g.dim != 3) throw ConfigError("su2 descriptor must have dim 3");
}

// Gauss-Legendre nodes in cos(beta) (ascending beta) and weights normalized to sum 1.
void gauss_legendre_beta(int n, std::vector<double>& beta, std::vector<double>& w) {
    beta.assign(n, 0.0);
    w.assign(n, 0.0);
    const auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative half
    std::vector<double> x;
    x.reserve(n);
    for (double z : zeros) {
        x.push_back(z);
        if (z != 0.0) x.push_back(-z);
    }
    std::sort(x.begin(), x.end(), std::greater<>());  // cos(beta) descending = beta ascending
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dp = boost::math::legendre_p_prime(n, x[i]);
        w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
        beta[i] = std::acos(x[i]);
        total += w[i];
    }
    for (double& wi : w) wi /= total;
}

}  // namespace

GroupDescriptor make_group(GroupKind kind, int n) {
    GroupDescriptor g;
    g.kind = kind;
    g.dim = kind == GroupKind::SU2 ? 3 : n;
    check_group(g);
    return g;
}

GroupDescriptor make_group(std::string_view kind, int n) {
    if (kind == "torus") return make_group(GroupKind::Torus, n);
    if (kind == "su2") return make_group(GroupKind::SU2, n);
    throw ConfigError("unsupported group kind '" + std::string(kind) + "'");
}

std::string group_name(const GroupDescriptor& g) {
    return g.is_su2() ? "su2" : "torus" + std::to_string(g.dim);
}

GroupPoint identity_point(const GroupDescriptor&) { return GroupPoint{}; }

Eigen::Matrix2cd su2_matrix(const GroupPoint& x) {
    const double ch = std::cos(0.5 * x.beta());
    const double sh = std::sin(0.5 * x.beta());
    const std::complex<double> a = std::polar(ch, -0.5 * (x.alpha() + x.gamma()));
    const std::complex<double> b = std::polar(sh, 0.5 * (x.alpha() - x.gamma()));
    Eigen::Matrix2cd u;
    u << a, -std::conj(b), b, std::conj(a);
    return u;
}

GroupPoint su2_from_matrix(const Eigen::Matrix2cd& u) {
    const std::complex<double> a = u(0, 0);
    const std::complex<double> b = u(1, 0);
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    GroupPoint p;
    if (mb <= kGimbalEps) {
        // alpha + gamma = -2 arg(a) (mod 4pi)
        const double total = wrap(-2.0 * std::arg(a), kFourPi);
        p.c = {wrap(total, kTwoPi), 0.0, wrap(total - wrap(total, kTwoPi), kFourPi)};
    } else if (ma <= kGimbalEps) {
        // alpha - gamma = 2 arg(b) (mod 4pi)
        const double diff = wrap(2.0 * std::arg(b), kFourPi);
        const double alpha = wrap(diff, kTwoPi);
        p.c = {alpha, kPi, wrap(alpha - diff, kFourPi)};
    } else {
        const double alpha = wrap(std::arg(b) - std::arg(a), kTwoPi);
        p.c = {alpha, 2.0 * std::atan2(mb, ma), wrap(-2.0 * std::arg(a) - alpha, kFourPi)};
    }
    return p;
}

double su2_angle(const GroupPoint& x) {
    const Eigen::Matrix2cd u = su2_matrix(x);
    const std::complex<double> a = u(0, 0);
    const double s = std::sqrt(a.imag() * a.imag() + std::norm(u(1, 0)));
    return std::atan2(s, a.real());
}

GroupPoint canonicalize(const GroupDescriptor& g, const GroupPoint& x) {
    if (g.is_su2()) return su2_from_matrix(su2_matrix(x));
    GroupPoint p;
    for (int j = 0; j < g.dim; ++j) p.c[j] = wrap(x.c[j], 1.0);
    return p;
}

GroupPoint multiply(const GroupDescriptor& g, const GroupPoint& x, const GroupPoint& y) {
    if (g.is_su2()) return su2_from_matrix(su2_matrix(x) * su2_matrix(y));
    GroupPoint p;
    for (int j = 0; j < g.dim; ++j) p.c[j] = wrap(x.c[j] + y.c[j], 1.0);
    return p;
}

GroupPoint inverse(const GroupDescriptor& g, const GroupPoint& x) {
    if (g.is_su2()) return su2_from_matrix(su2_matrix(x).adjoint());
    GroupPoint p;
    for (int j = 0; j < g.dim; ++j) p.c[j] = wrap(-x.c[j], 1.0);
    return p;
}

GroupPoint point_op(const GroupDescriptor& g, PointOp op, const GroupPoint& x, const GroupPoint& y) {
    return op == PointOp::Multiply ? multiply(g, x, y) : inverse(g, x);
}

GeometricWeights geometric_weights(const GroupDescriptor& g, const GroupPoint& x) {
    GeometricWeights w;
    if (g.is_su2()) {
        const double theta = su2_angle(x);
        const double s = std::sin(theta);
        w.distance = theta;
        w.rho_sq = 4.0 * s * s;
        w.q1 = 2.0 * std::sin(0.5 * theta);
        return w;
    }
    double d2 = 0.0;
    double q2 = 0.0;
    for (int j = 0; j < g.dim; ++j) {
        const double d = x.c[j] - std::round(x.c[j]);
        d2 += d * d;
        const double s = std::sin(kPi * x.c[j]);
        q2 += 4.0 * s * s;  // |e^{2 pi i x} - 1|^2
    }
    w.distance = kTwoPi * std::sqrt(d2);
    w.q1 = std::sqrt(q2);
    return w;
}

double diameter(const GroupDescriptor& g) {
    return g.is_su2() ? kPi : kPi * std::sqrt(static_cast<double>(g.dim));
}

QuadratureGrid build_grid(const GroupDescriptor& g, double bandlimit, double oversample) {
    check_group(g);
    if (bandlimit < 0.0) throw PreconditionError("grid bandlimit must be >= 0");
    if (oversample < 1.0) throw PreconditionError("grid oversample factor must be >= 1");

    QuadratureGrid grid;
    grid.group = g;
    grid.bandlimit = bandlimit;
    auto scaled = [oversample](double count) {
        return static_cast<int>(std::ceil(count * oversample - 1e-9));
    };

    if (g.is_torus()) {
        const int n_axis = scaled(2.0 * std::ceil(bandlimit - 1e-12) + 1.0);
        for (int j = 0; j < g.dim; ++j) {
            std::vector<double> nodes(n_axis);
            for (int a = 0; a < n_axis; ++a) nodes[a] = static_cast<double>(a) / n_axis;
            grid.axis_nodes.push_back(std::move(nodes));
            grid.axis_weights.emplace_back(n_axis, 1.0 / n_axis);
        }
        std::size_t total = 1;
        for (int j = 0; j < g.dim; ++j) total *= n_axis;
        grid.points.resize(total);
        grid.weights.assign(total, 1.0 / static_cast<double>(total));
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            for (int j = g.dim - 1; j >= 0; --j) {
                grid.points[idx].c[j] = grid.axis_nodes[j][rem % n_axis];
                rem /= n_axis;
            }
        }
        return grid;
    }

    const int n_ag = scaled(std::ceil(4.0 * bandlimit - 1e-9) + 2.0);
    const int n_beta = scaled(std::ceil(2.0 * bandlimit - 1e-9) + 1.0);
    std::vector<double> alpha(n_ag), gamma(n_ag), beta, wbeta;
    for (int a = 0; a < n_ag; ++a) {
        alpha[a] = kTwoPi * a / n_ag;
        gamma[a] = kFourPi * a / n_ag;
    }
    gauss_legendre_beta(n_beta, beta, wbeta);
    grid.axis_nodes = {alpha, beta, gamma};
    grid.axis_weights = {std::vector<double>(n_ag, 1.0 / n_ag), wbeta,
                         std::vector<double>(n_ag, 1.0 / n_ag)};

    const std::size_t total = static_cast<std::size_t>(n_ag) * n_beta * n_ag;
    grid.points.resize(total);
    grid.weights.resize(total);
    std::size_t idx = 0;
    for (int b = 0; b < n_beta; ++b)
        for (int a = 0; a < n_ag; ++a)
            for (int c = 0; c < n_ag; ++c, ++idx) {
                grid.points[idx].c = {alpha[a], beta[b], gamma[c]};
                grid.weights[idx] = wbeta[b] / (static_cast<double>(n_ag) * n_ag);
            }
    return grid;
}

}  // namespace gfm
