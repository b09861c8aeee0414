#include "gfm/fourier.hpp"

#include "gfm/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace gfm {
namespace {

using RowMatrixXcd = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid(const QuadratureGrid& grid, const DualSlice& dual) {
    if (!(grid.group == dual.group()))
        throw PreconditionError("grid and dual slice belong to different groups");
    if (grid.bandlimit + 1e-9 < dual.max_label())
        throw PreconditionError("grid bandlimit " + std::to_string(grid.bandlimit) +
                                " is below the dual slice's max label " +
                                std::to_string(dual.max_label()));
}

// Applies `table` (in_size x out_size) along `axis` of a 3-D row-major array.
std::vector<cd> transform_axis(const std::vector<cd>& in, std::array<std::size_t, 3>& shape,
                               int axis, const Eigen::MatrixXcd& table) {
    const std::size_t n_in = shape[axis];
    const std::size_t n_out = static_cast<std::size_t>(table.cols());
    std::array<std::size_t, 3> out_shape = shape;
    out_shape[axis] = n_out;
    std::size_t outer = 1, inner = 1;
    for (int j = 0; j < axis; ++j) outer *= shape[j];
    for (int j = axis + 1; j < 3; ++j) inner *= shape[j];
    std::vector<cd> out(outer * n_out * inner, cd{});
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t a = 0; a < n_in; ++a) {
            const cd* src = &in[(o * n_in + a) * inner];
            for (std::size_t k = 0; k < n_out; ++k) {
                const cd t = table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k));
                cd* dst = &out[(o * n_out + k) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i] * t;
            }
        }
    shape = out_shape;
    return out;
}

// Torus exponential table; forward tables carry the axis weights.
Eigen::MatrixXcd torus_table(const QuadratureGrid& grid, int axis, int bound, bool forward) {
    const auto& nodes = grid.axis_nodes[axis];
    const auto& w = grid.axis_weights[axis];
    const int k_count = 2 * bound + 1;
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd t = forward ? Eigen::MatrixXcd(n, k_count) : Eigen::MatrixXcd(k_count, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (int kk = 0; kk < k_count; ++kk) {
            const double phase = kTwoPi * nodes[a] * (kk - bound);
            if (forward)
                t(a, kk) = w[a] * std::polar(1.0, -phase);
            else
                t(kk, a) = std::polar(1.0, phase);
        }
    return t;
}

FourierCoefficients torus_forward(const GridFunction& f, const DualPtr& dual) {
    const QuadratureGrid& grid = *f.grid;
    const int n = grid.group.dim;
    const int bound = dual->max_label_int();
    std::array<std::size_t, 3> shape{1, 1, 1};
    for (int j = 0; j < n; ++j) shape[j] = grid.axis_size(j);
    std::vector<cd> work = f.values;
    for (int j = n - 1; j >= 0; --j) work = transform_axis(work, shape, j, torus_table(grid, j, bound, true));

    FourierCoefficients out(dual);
    const std::size_t side = 2 * bound + 1;
    for (std::size_t i = 0; i < dual->size(); ++i) {
        const auto& k = (*dual)[i].label;
        std::size_t idx = 0;
        for (int j = 0; j < n; ++j) idx = idx * side + static_cast<std::size_t>(k[j] + bound);
        out.data()[dual->offset(i)] = work[idx];
    }
    return out;
}

GridFunction torus_synthesize(const FourierCoefficients& coeffs, const GridPtr& grid) {
    const DualSlice& dual = coeffs.slice();
    const int n = grid->group.dim;
    const int bound = dual.max_label_int();
    const std::size_t side = 2 * bound + 1;
    std::array<std::size_t, 3> shape{1, 1, 1};
    std::size_t cells = 1;
    for (int j = 0; j < n; ++j) {
        shape[j] = side;
        cells *= side;
    }
    std::vector<cd> work(cells, cd{});
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const auto& k = dual[i].label;
        std::size_t idx = 0;
        for (int j = 0; j < n; ++j) idx = idx * side + static_cast<std::size_t>(k[j] + bound);
        work[idx] = coeffs.data()[dual.offset(i)];
    }
    for (int j = n - 1; j >= 0; --j) work = transform_axis(work, shape, j, torus_table(*grid, j, bound, false));
    GridFunction out(grid);
    out.values = std::move(work);
    return out;
}

// Exponential tables over the half-integer range two_m in [-L2, L2].
RowMatrixXcd su2_phase_table(const std::vector<double>& angles, const std::vector<double>& weights,
                             int l2, double sign) {
    const Eigen::Index m_count = 2 * l2 + 1;
    RowMatrixXcd t(static_cast<Eigen::Index>(angles.size()), m_count);
    for (std::size_t a = 0; a < angles.size(); ++a)
        for (Eigen::Index tm = 0; tm < m_count; ++tm) {
            const double m = 0.5 * static_cast<double>(tm - l2);
            t(static_cast<Eigen::Index>(a), tm) = weights[a] * std::polar(1.0, sign * m * angles[a]);
        }
    return t;
}

FourierCoefficients su2_forward(const GridFunction& f, const DualPtr& dual) {
    const QuadratureGrid& grid = *f.grid;
    const int l2 = dual->max_label_int();
    const auto na = static_cast<Eigen::Index>(grid.axis_size(0));
    const auto nb = grid.axis_size(1);
    const auto ng = static_cast<Eigen::Index>(grid.axis_size(2));
    const RowMatrixXcd e_alpha = su2_phase_table(grid.axis_nodes[0], grid.axis_weights[0], l2, +1.0);
    const RowMatrixXcd e_gamma = su2_phase_table(grid.axis_nodes[2], grid.axis_weights[2], l2, +1.0);

    FourierCoefficients out(dual);
    for (std::size_t b = 0; b < nb; ++b) {
        Eigen::Map<const RowMatrixXcd> slab(f.values.data() + b * na * ng, na, ng);
        const RowMatrixXcd partial = slab * e_gamma;                          // (alpha, m)
        const RowMatrixXcd mixed = e_alpha.transpose() * partial;             // (m', m)
        const double wb = grid.axis_weights[1][b];
        const auto d = wigner_small_d_all(l2, grid.axis_nodes[1][b]);
        for (std::size_t idx = 0; idx < dual->size(); ++idx) {
            const int tl = (*dual)[idx].twice_spin;
            auto blk = out.block(idx);
            const Eigen::MatrixXd& dl = d[tl];
            for (int i = 0; i <= tl; ++i) {
                const int ti = tl - 2 * i + l2;  // index of m_i
                for (int j = 0; j <= tl; ++j) {
                    const int tj = tl - 2 * j + l2;
                    blk(i, j) += wb * dl(j, i) * mixed(tj, ti);
                }
            }
        }
    }
    return out;
}

GridFunction su2_synthesize(const FourierCoefficients& coeffs, const GridPtr& grid) {
    const DualSlice& dual = coeffs.slice();
    const int l2 = dual.max_label_int();
    const Eigen::Index m_count = 2 * l2 + 1;
    const auto na = static_cast<Eigen::Index>(grid->axis_size(0));
    const auto nb = grid->axis_size(1);
    const auto ng = static_cast<Eigen::Index>(grid->axis_size(2));
    const std::vector<double> ones_a(static_cast<std::size_t>(na), 1.0);
    const std::vector<double> ones_g(static_cast<std::size_t>(ng), 1.0);
    const RowMatrixXcd e_alpha = su2_phase_table(grid->axis_nodes[0], ones_a, l2, -1.0);
    const RowMatrixXcd e_gamma_t = su2_phase_table(grid->axis_nodes[2], ones_g, l2, -1.0).transpose();

    GridFunction out(grid);
    RowMatrixXcd c(m_count, m_count);
    for (std::size_t b = 0; b < nb; ++b) {
        const auto d = wigner_small_d_all(l2, grid->axis_nodes[1][b]);
        c.setZero();
        for (std::size_t idx = 0; idx < dual.size(); ++idx) {
            const int tl = dual[idx].twice_spin;
            const auto blk = coeffs.block(idx);
            const Eigen::MatrixXd& dl = d[tl];
            const double dim = tl + 1;
            for (int i = 0; i <= tl; ++i) {
                const int ti = tl - 2 * i + l2;
                for (int k = 0; k <= tl; ++k) c(ti, tl - 2 * k + l2) += dim * dl(i, k) * blk(k, i);
            }
        }
        Eigen::Map<RowMatrixXcd> slab(out.values.data() + b * na * ng, na, ng);
        slab.noalias() = (e_alpha * c) * e_gamma_t;
    }
    return out;
}

cd su2_point_value(const FourierCoefficients& coeffs, const GroupPoint& x, bool central) {
    const DualSlice& dual = coeffs.slice();
    const int l2 = dual.max_label_int();
    cd acc{};
    if (central) {
        const auto chi = su2_characters(l2, std::cos(su2_angle(x)));
        for (std::size_t idx = 0; idx < dual.size(); ++idx) {
            const int tl = dual[idx].twice_spin;
            acc += static_cast<double>(tl + 1) * chi[tl] * coeffs.block(idx)(0, 0);
        }
        return acc;
    }
    const auto d = wigner_small_d_all(l2, x.beta());
    std::vector<cd> ea(2 * l2 + 1), eg(2 * l2 + 1);
    for (int t = 0; t <= 2 * l2; ++t) {
        const double m = 0.5 * (t - l2);
        ea[t] = std::polar(1.0, -m * x.alpha());
        eg[t] = std::polar(1.0, -m * x.gamma());
    }
    for (std::size_t idx = 0; idx < dual.size(); ++idx) {
        const int tl = dual[idx].twice_spin;
        const auto blk = coeffs.block(idx);
        const Eigen::MatrixXd& dl = d[tl];
        cd tr{};
        for (int i = 0; i <= tl; ++i)
            for (int k = 0; k <= tl; ++k)
                tr += ea[tl - 2 * i + l2] * dl(i, k) * eg[tl - 2 * k + l2] * blk(k, i);
        acc += static_cast<double>(tl + 1) * tr;
    }
    return acc;
}

cd torus_point_value(const FourierCoefficients& coeffs, const GroupPoint& x) {
    const DualSlice& dual = coeffs.slice();
    const int n = dual.group().dim;
    const int bound = dual.max_label_int();
    std::array<std::vector<cd>, 3> e;
    for (int j = 0; j < n; ++j) {
        e[j].resize(2 * bound + 1);
        for (int k = -bound; k <= bound; ++k) e[j][k + bound] = std::polar(1.0, kTwoPi * x.c[j] * k);
    }
    cd acc{};
    for (std::size_t idx = 0; idx < dual.size(); ++idx) {
        const auto& k = dual[idx].label;
        cd term = coeffs.data()[dual.offset(idx)];
        for (int j = 0; j < n; ++j) term *= e[j][k[j] + bound];
        acc += term;
    }
    return acc;
}

}  // namespace

GridPtr make_grid(const GroupDescriptor& g, double bandlimit, double oversample) {
    return std::make_shared<const QuadratureGrid>(build_grid(g, bandlimit, oversample));
}

MatrixField::MatrixField(DualPtr dual) : dual_(std::move(dual)), data_(dual_->total_entries(), cd{}) {}

Eigen::Map<Eigen::MatrixXcd> MatrixField::block(std::size_t i) {
    const int d = (*dual_)[i].dim;
    return {data_.data() + dual_->offset(i), d, d};
}

Eigen::Map<const Eigen::MatrixXcd> MatrixField::block(std::size_t i) const {
    const int d = (*dual_)[i].dim;
    return {data_.data() + dual_->offset(i), d, d};
}

bool MatrixField::same_slice(const MatrixField& other) const {
    if (dual_ == other.dual_) return true;
    if (!dual_ || !other.dual_) return false;
    return dual_->group() == other.dual_->group() && dual_->size() == other.dual_->size() &&
           dual_->cutoff() == other.dual_->cutoff();
}

bool MatrixField::is_central() const {
    for (std::size_t i = 0; i < size(); ++i) {
        const auto b = block(i);
        for (Eigen::Index r = 0; r < b.rows(); ++r)
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                if (r == c ? b(r, c) != b(0, 0) : b(r, c) != cd{}) return false;
            }
    }
    return true;
}

FourierCoefficients forward_transform(const GridFunction& f, const DualPtr& dual) {
    if (!f.grid) throw PreconditionError("grid function has no grid");
    if (f.values.size() != f.grid->size()) throw PreconditionError("sample count does not match grid size");
    require_grid(*f.grid, *dual);
    return dual->group().is_su2() ? su2_forward(f, dual) : torus_forward(f, dual);
}

std::vector<cd> inverse_evaluate(const FourierCoefficients& coeffs, std::span<const GroupPoint> points) {
    std::vector<cd> out(points.size());
    const bool su2 = coeffs.slice().group().is_su2();
    const bool central = su2 && coeffs.is_central();
    for (std::size_t p = 0; p < points.size(); ++p)
        out[p] = su2 ? su2_point_value(coeffs, points[p], central) : torus_point_value(coeffs, points[p]);
    return out;
}

cd inverse_evaluate(const FourierCoefficients& coeffs, const GroupPoint& point) {
    return inverse_evaluate(coeffs, std::span<const GroupPoint>(&point, 1)).front();
}

GridFunction synthesize(const FourierCoefficients& coeffs, const GridPtr& grid) {
    if (!(grid->group == coeffs.slice().group()))
        throw PreconditionError("grid and coefficients belong to different groups");
    return grid->group.is_su2() ? su2_synthesize(coeffs, grid) : torus_synthesize(coeffs, grid);
}

double plancherel_norm(const MatrixField& coeffs) {
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += coeffs.slice()[i].dim * coeffs.block(i).squaredNorm();
    return std::sqrt(acc);
}

cd plancherel_inner(const MatrixField& f, const MatrixField& g) {
    if (!f.same_slice(g)) throw PreconditionError("fields live on different dual slices");
    cd acc{};
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += static_cast<double>(f.slice()[i].dim) * (f.block(i).array() * g.block(i).array().conjugate()).sum();
    return acc;
}

FourierCoefficients convolve(const FourierCoefficients& f, const FourierCoefficients& g) {
    if (!f.same_slice(g)) throw PreconditionError("convolution operands live on different dual slices");
    FourierCoefficients out(f.dual());
    for (std::size_t i = 0; i < f.size(); ++i) out.block(i).noalias() = g.block(i) * f.block(i);
    return out;
}

FourierCoefficients left_translate(const FourierCoefficients& f, const GroupPoint& z) {
    FourierCoefficients out(f.dual());
    const auto& g = f.slice().group();
    for (std::size_t i = 0; i < f.size(); ++i)
        out.block(i).noalias() = f.block(i) * evaluate_irrep(g, f.slice()[i], z);
    return out;
}

FourierCoefficients transfer_to_slice(const MatrixField& field, const DualPtr& target) {
    const DualSlice& src = field.slice();
    if (!(src.group() == target->group())) throw PreconditionError("slices belong to different groups");
    FourierCoefficients out(target);
    for (std::size_t i = 0; i < target->size(); ++i) {
        const auto& xi = (*target)[i];
        const auto j = src.group().is_su2() ? src.find_spin(xi.twice_spin) : src.find(xi.label);
        if (j) out.block(i) = field.block(*j);
    }
    return out;
}

cd grid_inner(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid && f.values.size() != g.values.size())
        throw PreconditionError("grid functions live on different grids");
    cd acc{};
    for (std::size_t p = 0; p < f.values.size(); ++p)
        acc += f.grid->weights[p] * f.values[p] * std::conj(g.values[p]);
    return acc;
}

double roundtrip_error(const FourierCoefficients& coeffs, const GridPtr& grid) {
    const auto back = forward_transform(synthesize(coeffs, grid), coeffs.dual());
    double err = 0.0;
    for (std::size_t k = 0; k < back.data().size(); ++k) err = std::max(err, std::abs(back.data()[k] - coeffs.data()[k]));
    return err;
}

double plancherel_residual(const FourierCoefficients& coeffs, const GridPtr& grid) {
    const double hs = plancherel_norm(coeffs);
    if (hs == 0.0) return 0.0;
    const auto f = synthesize(coeffs, grid);
    return std::abs(std::sqrt(grid_inner(f, f).real()) - hs) / hs;
}

nlohmann::json coefficients_to_json(const MatrixField& field, const std::string& role) {
    const DualSlice& dual = field.slice();
    const GroupDescriptor& g = dual.group();
    nlohmann::json j;
    j["group"] = {{"kind", g.is_su2() ? "su2" : "torus"}, {"n", g.dim}};
    j["cutoff"] = dual.cutoff();
    j["role"] = role;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < dual.size(); ++i) {
        nlohmann::json e;
        if (g.is_su2())
            e["label"] = dual[i].spin();
        else
            e["label"] = std::vector<int>(dual[i].label.begin(), dual[i].label.begin() + g.dim);
        e["dim"] = dual[i].dim;
        const auto b = field.block(i);
        nlohmann::json m = nlohmann::json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r)
            for (Eigen::Index c = 0; c < b.cols(); ++c) m.push_back({b(r, c).real(), b(r, c).imag()});
        e["matrix"] = std::move(m);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

FourierCoefficients coefficients_from_json(const nlohmann::json& j) {
    try {
        const auto& gj = j.at("group");
        const GroupDescriptor g = make_group(gj.at("kind").get<std::string>(), gj.value("n", 1));
        FourierCoefficients out(enumerate_dual(g, j.at("cutoff").get<double>()));
        const DualSlice& dual = out.slice();
        for (const auto& e : j.at("entries")) {
            std::optional<std::size_t> idx;
            if (g.is_su2()) {
                idx = dual.find_spin(static_cast<int>(std::lround(2.0 * e.at("label").get<double>())));
            } else {
                const auto lab = e.at("label").get<std::vector<int>>();
                if (static_cast<int>(lab.size()) != g.dim) throw ConfigError("label dimension mismatch");
                std::array<int, 3> k{0, 0, 0};
                for (int q = 0; q < g.dim; ++q) k[q] = lab[q];
                idx = dual.find(k);
            }
            if (!idx) throw ConfigError("entry label " + e.at("label").dump() + " is outside the slice");
            auto b = out.block(*idx);
            const auto& m = e.at("matrix");
            if (m.size() != static_cast<std::size_t>(b.size())) throw ConfigError("matrix size mismatch");
            std::size_t q = 0;
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                for (Eigen::Index c = 0; c < b.cols(); ++c, ++q)
                    b(r, c) = cd{m[q].at(0).get<double>(), m[q].at(1).get<double>()};
        }
        return out;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed coefficient file: ") + ex.what());
    }
}

}  // namespace gfm
