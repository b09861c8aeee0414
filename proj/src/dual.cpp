#include "gfm/dual.hpp"

#include "gfm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gfm {
namespace {

constexpr double kCutoffSlack = 1e-12;

void check_spin(int twice_spin) {
    if (twice_spin < 0) throw PreconditionError("negative spin");
    if (twice_spin > kMaxTwiceSpin)
        throw RangeError("spin " + std::to_string(twice_spin / 2.0) +
                         " exceeds the validated range l <= 64");
}

}  // namespace

double torus_bracket(const std::array<int, 3>& k, int dim) {
    double s = 1.0;
    for (int j = 0; j < dim; ++j) s += static_cast<double>(k[j]) * k[j];
    return std::sqrt(s);
}

double su2_bracket(int twice_spin) {
    const double l = 0.5 * twice_spin;
    return std::sqrt(1.0 + l * (l + 1.0));
}

std::string label_string(const GroupDescriptor& g, const IrrepIndex& xi) {
    if (g.is_su2()) {
        if (xi.twice_spin % 2 == 0) return std::to_string(xi.twice_spin / 2);
        return std::to_string(xi.twice_spin) + "/2";
    }
    if (g.dim == 1) return std::to_string(xi.label[0]);
    std::string s = "(";
    for (int j = 0; j < g.dim; ++j) {
        if (j) s += ",";
        s += std::to_string(xi.label[j]);
    }
    return s + ")";
}

DualSlice::DualSlice(GroupDescriptor group, double cutoff) : group_(group), cutoff_(cutoff) {
    if (!(cutoff >= 1.0)) throw PreconditionError("dual cutoff must be >= 1");
    const double limit = cutoff * (1.0 + kCutoffSlack);

    if (group_.is_su2()) {
        for (int tl = 0; su2_bracket(tl) <= limit; ++tl) {
            check_spin(tl);
            IrrepIndex xi;
            xi.twice_spin = tl;
            xi.dim = tl + 1;
            xi.bracket = su2_bracket(tl);
            irreps_.push_back(xi);
        }
        max_label_int_ = irreps_.back().twice_spin;
    } else {
        const int n = group_.dim;
        int bound = 0;
        while (std::sqrt(1.0 + static_cast<double>(bound + 1) * (bound + 1)) <= limit) ++bound;
        std::array<int, 3> k{0, 0, 0};
        std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (int j = 0; j < n; ++j) {
            lo[j] = -bound;
            hi[j] = bound;
        }
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
                for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
                    const double br = torus_bracket(k, n);
                    if (br > limit) continue;
                    IrrepIndex xi;
                    xi.label = k;
                    xi.bracket = br;
                    irreps_.push_back(xi);
                }
        // exact integer |k|^2 keeps the ordering deterministic across platforms
        auto norm2 = [n](const IrrepIndex& a) {
            long s = 0;
            for (int j = 0; j < n; ++j) s += static_cast<long>(a.label[j]) * a.label[j];
            return s;
        };
        std::sort(irreps_.begin(), irreps_.end(), [&](const IrrepIndex& a, const IrrepIndex& b) {
            const long na = norm2(a), nb = norm2(b);
            if (na != nb) return na < nb;
            return a.label < b.label;
        });
        max_label_int_ = bound;
        const long side = 2L * bound + 1;
        long cells = 1;
        for (int j = 0; j < n; ++j) cells *= side;
        torus_lookup_.assign(static_cast<std::size_t>(cells), -1);
        for (std::size_t i = 0; i < irreps_.size(); ++i) {
            long idx = 0;
            for (int j = 0; j < n; ++j) idx = idx * side + (irreps_[i].label[j] + bound);
            torus_lookup_[static_cast<std::size_t>(idx)] = static_cast<long>(i);
        }
    }

    offsets_.resize(irreps_.size());
    for (std::size_t i = 0; i < irreps_.size(); ++i) {
        offsets_[i] = total_entries_;
        total_entries_ += static_cast<std::size_t>(irreps_[i].dim) * irreps_[i].dim;
    }
}

double DualSlice::max_label() const {
    return group_.is_su2() ? 0.5 * max_label_int_ : static_cast<double>(max_label_int_);
}

std::optional<std::size_t> DualSlice::find(const std::array<int, 3>& k) const {
    if (!group_.is_torus()) return std::nullopt;
    const int b = max_label_int_;
    const long side = 2L * b + 1;
    long idx = 0;
    for (int j = 0; j < group_.dim; ++j) {
        if (k[j] < -b || k[j] > b) return std::nullopt;
        idx = idx * side + (k[j] + b);
    }
    for (int j = group_.dim; j < 3; ++j)
        if (k[j] != 0) return std::nullopt;
    const long v = torus_lookup_[static_cast<std::size_t>(idx)];
    if (v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
}

std::optional<std::size_t> DualSlice::find_spin(int twice_spin) const {
    if (!group_.is_su2() || twice_spin < 0 || twice_spin > max_label_int_) return std::nullopt;
    return static_cast<std::size_t>(twice_spin);
}

DualPtr enumerate_dual(const GroupDescriptor& g, double cutoff) {
    return std::make_shared<const DualSlice>(g, cutoff);
}

DualPtr su2_dual_up_to_spin(double l_max) {
    const int tl = static_cast<int>(std::lround(2.0 * l_max));
    return enumerate_dual(make_group(GroupKind::SU2), su2_bracket(tl));
}

std::vector<Eigen::MatrixXd> wigner_small_d_all(int twice_spin_max, double beta) {
    check_spin(twice_spin_max);
    const double ch = std::cos(0.5 * beta);
    const double sh = std::sin(0.5 * beta);
    // spin-1/2 block, rows/cols ordered m = +1/2, -1/2
    const double half[2][2] = {{ch, -sh}, {sh, ch}};

    std::vector<Eigen::MatrixXd> d(twice_spin_max + 1);
    d[0] = Eigen::MatrixXd::Ones(1, 1);
    for (int n = 1; n <= twice_spin_max; ++n) {
        // couple spin (n-1)/2 with 1/2 into the stretched state n/2:
        // c_+(i) = sqrt((n-i)/n) picks i in the parent, c_-(i) = sqrt(i/n) picks i-1
        const Eigen::MatrixXd& prev = d[n - 1];
        Eigen::MatrixXd cur = Eigen::MatrixXd::Zero(n + 1, n + 1);
        std::vector<double> cp(n + 1), cm(n + 1);
        for (int i = 0; i <= n; ++i) {
            cp[i] = std::sqrt(static_cast<double>(n - i) / n);
            cm[i] = std::sqrt(static_cast<double>(i) / n);
        }
        for (int i = 0; i <= n; ++i) {
            for (int k = 0; k <= n; ++k) {
                double acc = 0.0;
                if (i < n && k < n) acc += cp[i] * cp[k] * half[0][0] * prev(i, k);
                if (i < n && k > 0) acc += cp[i] * cm[k] * half[0][1] * prev(i, k - 1);
                if (i > 0 && k < n) acc += cm[i] * cp[k] * half[1][0] * prev(i - 1, k);
                if (i > 0 && k > 0) acc += cm[i] * cm[k] * half[1][1] * prev(i - 1, k - 1);
                cur(i, k) = acc;
            }
        }
        d[n] = std::move(cur);
    }
    return d;
}

Eigen::MatrixXd wigner_small_d(int twice_spin, double beta) {
    return wigner_small_d_all(twice_spin, beta)[twice_spin];
}

Eigen::MatrixXcd evaluate_irrep(const GroupDescriptor& g, const IrrepIndex& xi, const GroupPoint& x) {
    if (g.is_torus()) {
        double phase = 0.0;
        for (int j = 0; j < g.dim; ++j) phase += x.c[j] * xi.label[j];
        Eigen::MatrixXcd m(1, 1);
        m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * phase);
        return m;
    }
    check_spin(xi.twice_spin);
    const int n = xi.twice_spin;
    if (n == 1) return su2_matrix(x);
    const Eigen::MatrixXd d = wigner_small_d(n, x.beta());
    Eigen::MatrixXcd out(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        const double mp = 0.5 * n - i;
        for (int k = 0; k <= n; ++k) {
            const double m = 0.5 * n - k;
            out(i, k) = std::polar(d(i, k), -(mp * x.alpha() + m * x.gamma()));
        }
    }
    return out;
}

std::vector<double> su2_characters(int twice_spin_max, double cos_theta) {
    std::vector<double> u(twice_spin_max + 1);
    u[0] = 1.0;
    if (twice_spin_max >= 1) u[1] = 2.0 * cos_theta;
    for (int k = 2; k <= twice_spin_max; ++k) u[k] = 2.0 * cos_theta * u[k - 1] - u[k - 2];
    return u;
}

std::complex<double> character(const GroupDescriptor& g, const IrrepIndex& xi, const GroupPoint& x) {
    if (g.is_torus()) return evaluate_irrep(g, xi, x)(0, 0);
    check_spin(xi.twice_spin);
    return su2_characters(xi.twice_spin, std::cos(su2_angle(x)))[xi.twice_spin];
}

}  // namespace gfm
