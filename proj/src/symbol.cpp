#include "gfm/symbol.hpp"

#include "gfm/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace gfm {
namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double op_norm(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

// Largest 2l with <l> <= cutoff.
int su2_twice_spin_below(double cutoff) {
    int tl = 0;
    while (su2_bracket(tl + 1) <= cutoff * (1.0 + 1e-12)) ++tl;
    return tl;
}

// Bandlimit of a grid exact for products of the slice's functions with
// polynomials of degree `extra` in the generators.
double padded_bandlimit(const DualSlice& dual, int extra) {
    return dual.group().is_su2() ? dual.max_label() + 0.5 * extra : dual.max_label() + extra;
}

void validity_after(const Symbol& in, const MultiIndex& alpha, Symbol& out) {
    const DualSlice& dual = in.slice();
    const int k = order(alpha);
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const auto& xi = dual[i];
        bool ok = true;
        if (dual.group().is_su2()) {
            // a degree-1 generator moves the spin by +-1/2
            for (int t = xi.twice_spin - k; ok && t <= xi.twice_spin + k; t += 2) {
                if (t < 0) continue;
                const auto j = dual.find_spin(t);
                ok = j && in.valid(*j);
            }
        } else {
            // shifts xi + beta for 0 <= beta <= alpha
            const int n = dual.group().dim;
            std::array<int, 3> beta{0, 0, 0};
            while (ok) {
                std::array<int, 3> lab = xi.label;
                for (int j = 0; j < n; ++j) lab[j] += beta[j];
                const auto j = dual.find(lab);
                ok = j && in.valid(*j);
                int axis = 0;
                while (axis < n && ++beta[axis] > alpha[axis]) beta[axis++] = 0;
                if (axis == n) break;
            }
        }
        out.set_valid(i, ok);
    }
}

std::string margin_message(const DualSlice& dual, double output_cutoff, int k) {
    return "differences of order " + std::to_string(k) + " on " + group_name(dual.group()) +
           " need a cutoff of at least " + fmt_double(required_cutoff(dual.group(), output_cutoff, k)) +
           " (have " + fmt_double(dual.cutoff()) + ")";
}

CheckReport finish(CheckReport r) {
    r.headline = 0.0;
    for (const auto& c : r.constants) r.headline = std::max(r.headline, c.value);
    r.passed = r.headline <= r.threshold;
    return r;
}

}  // namespace

ScalarProfile ScalarProfile::constant(double c) { return {Kind::Constant, c, 0, 0}; }
ScalarProfile ScalarProfile::power_it(double t) { return {Kind::PowerIt, t, 0, 0}; }
ScalarProfile ScalarProfile::wave() { return {Kind::Wave, 0.0, 0, 0}; }
ScalarProfile ScalarProfile::sign() { return {Kind::Sign, 0.0, 0, 0}; }
ScalarProfile ScalarProfile::window(int ell) { return {Kind::Window, 0.0, ell, 0}; }
ScalarProfile ScalarProfile::dyadic_rademacher(std::uint64_t seed) { return {Kind::DyadicRademacher, 0.0, 0, seed}; }

std::string ScalarProfile::name() const {
    switch (kind) {
        case Kind::Constant: return "constant(" + fmt_double(t) + ")";
        case Kind::PowerIt: return "power_it(t=" + fmt_double(t) + ")";
        case Kind::Wave: return "wave";
        case Kind::Sign: return "sign";
        case Kind::Window: return "window(ell=" + std::to_string(ell) + ")";
        case Kind::DyadicRademacher: return "dyadic_rademacher(seed=" + std::to_string(seed) + ")";
    }
    return "?";
}

cd ScalarProfile::operator()(double lambda) const {
    switch (kind) {
        case Kind::Constant: return t;
        case Kind::PowerIt: return std::polar(1.0, t * std::log(lambda));
        case Kind::Wave: return std::polar(1.0, lambda);
        case Kind::Sign: throw PreconditionError("the sign profile depends on the label, not on <xi>");
        case Kind::Window: return LPPartition{}.psi(ell, lambda);
        case Kind::DyadicRademacher: {
            // block j holds 2^{j-1} <= lambda < 2^j; bit j of the first draw picks its sign
            const int j = std::clamp(static_cast<int>(std::floor(std::log2(lambda))) + 1, 0, 63);
            std::mt19937_64 rng(seed);
            return ((rng() >> j) & 1U) ? 1.0 : -1.0;
        }
    }
    return 0.0;
}

ScalarProfile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError("symbol profile must be an object with a string \"type\"");
    const std::string type = j["type"];
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : j.items()) {
            if (k == "type") continue;
            if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end())
                throw ConfigError("unknown field \"" + k + "\" in symbol profile \"" + type + "\"");
        }
    };
    auto number = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number()) throw ConfigError(std::string("symbol profile needs numeric \"") + key + "\"");
        return j[key].get<double>();
    };
    if (type == "power_it") {
        allow({"t"});
        return ScalarProfile::power_it(number("t"));
    }
    if (type == "wave") {
        allow({});
        return ScalarProfile::wave();
    }
    if (type == "sign") {
        allow({});
        return ScalarProfile::sign();
    }
    if (type == "window") {
        allow({"ell"});
        if (!j.contains("ell") || !j["ell"].is_number_integer() || j["ell"].get<int>() < 0)
            throw ConfigError("window profile needs a nonnegative integer \"ell\"");
        return ScalarProfile::window(j["ell"].get<int>());
    }
    if (type == "dyadic_rademacher") {
        allow({"seed"});
        if (!j.contains("seed") || !j["seed"].is_number_unsigned())
            throw ConfigError("dyadic_rademacher profile needs an unsigned \"seed\"");
        return ScalarProfile::dyadic_rademacher(j["seed"].get<std::uint64_t>());
    }
    if (type == "constant") {
        allow({"value"});
        return ScalarProfile::constant(j.contains("value") ? number("value") : 1.0);
    }
    throw ConfigError("unknown symbol profile type \"" + type + "\"");
}

nlohmann::json profile_to_json(const ScalarProfile& p) {
    using K = ScalarProfile::Kind;
    switch (p.kind) {
        case K::Constant: return {{"type", "constant"}, {"value", p.t}};
        case K::PowerIt: return {{"type", "power_it"}, {"t", p.t}};
        case K::Wave: return {{"type", "wave"}};
        case K::Sign: return {{"type", "sign"}};
        case K::Window: return {{"type", "window"}, {"ell", p.ell}};
        case K::DyadicRademacher: return {{"type", "dyadic_rademacher"}, {"seed", p.seed}};
    }
    return {};
}

Symbol::Symbol(DualPtr dual) : MatrixField(std::move(dual)), valid_(size(), 1) {}

Symbol::Symbol(const MatrixField& field) : MatrixField(field), valid_(size(), 1) {}

std::size_t Symbol::valid_count() const { return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), 1)); }

double Symbol::linf_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, op_norm(block(i)));
    return m;
}

FourierCoefficients Symbol::as_coefficients() const {
    FourierCoefficients c(dual_);
    c.data() = data_;
    return c;
}

Symbol identity_symbol(const DualPtr& dual) { return build_spectral_symbol(ScalarProfile::constant(1.0), dual); }

Symbol build_spectral_symbol(const ScalarProfile& g, const DualPtr& dual) {
    Symbol s(dual);
    const bool by_label = g.kind == ScalarProfile::Kind::Sign;
    if (by_label && !(dual->group().is_torus() && dual->group().dim == 1))
        throw PreconditionError("the sign profile is defined on torus1 only");
    for (std::size_t i = 0; i < dual->size(); ++i) {
        const auto& xi = (*dual)[i];
        const cd v = by_label ? cd((xi.label[0] > 0) - (xi.label[0] < 0)) : g(xi.bracket);
        s.block(i) = Eigen::MatrixXcd::Identity(xi.dim, xi.dim) * v;
    }
    return s;
}

Symbol multiply_symbols(const Symbol& a, const Symbol& b) {
    if (!a.same_slice(b)) throw PreconditionError("symbols live on different dual slices");
    Symbol out(a.dual());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.block(i) = a.block(i) * b.block(i);
        out.set_valid(i, a.valid(i) && b.valid(i));
    }
    return out;
}

int generator_count(const GroupDescriptor& g) { return g.is_su2() ? 4 : g.dim; }

std::vector<cd> generator_values(const GroupDescriptor& g, const GroupPoint& x) {
    std::vector<cd> q;
    if (g.is_su2()) {
        const Eigen::Matrix2cd u = su2_matrix(x);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) q.push_back(u(i, j) - (i == j ? 1.0 : 0.0));
    } else {
        for (int j = 0; j < g.dim; ++j) q.push_back(std::polar(1.0, -2.0 * std::numbers::pi * x.c[j]) - 1.0);
    }
    return q;
}

int order(const MultiIndex& alpha) {
    int k = 0;
    for (int a : alpha) k += a;
    return k;
}

std::vector<MultiIndex> multi_indices(int generators, int k) {
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(generators), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == generators - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int a = left; a >= 0; --a) {
            cur[pos] = a;
            self(self, pos + 1, left - a);
        }
    };
    if (generators > 0) rec(rec, 0, k);
    return out;
}

std::string multi_index_string(const MultiIndex& alpha) {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
    return s + ")";
}

double required_cutoff(const GroupDescriptor& g, double output_cutoff, int k) {
    if (g.is_su2()) return su2_bracket(su2_twice_spin_below(output_cutoff) + k);
    const double radius = std::sqrt(std::max(0.0, output_cutoff * output_cutoff - 1.0));
    return std::hypot(1.0, radius + k);
}

DifferenceEngine::DifferenceEngine(const Symbol& sigma, int max_order) : sigma_(sigma), max_order_(max_order) {
    if (max_order < 0) throw PreconditionError("difference order must be nonnegative");
    const DualSlice& dual = sigma.slice();
    grid_ = make_grid(dual.group(), padded_bandlimit(dual, max_order));
    samples_ = synthesize(sigma.as_coefficients(), grid_);
    generators_.assign(static_cast<std::size_t>(generator_count(dual.group())), std::vector<cd>(grid_->size()));
    for (std::size_t p = 0; p < grid_->size(); ++p) {
        const auto q = generator_values(dual.group(), grid_->points[p]);
        for (std::size_t j = 0; j < q.size(); ++j) generators_[j][p] = q[j];
    }
}

Symbol DifferenceEngine::apply(const MultiIndex& alpha, std::optional<double> output_cutoff) const {
    const DualSlice& dual = sigma_.slice();
    if (alpha.size() != generators_.size())
        throw PreconditionError("multi-index has " + std::to_string(alpha.size()) + " entries, expected " +
                                std::to_string(generators_.size()));
    const int k = order(alpha);
    if (k > max_order_) throw PreconditionError("difference order exceeds the engine's margin");
    for (int a : alpha)
        if (a < 0) throw PreconditionError("multi-index entries must be nonnegative");

    GridFunction prod = samples_;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int rep = 0; rep < alpha[j]; ++rep)
            for (std::size_t p = 0; p < prod.values.size(); ++p) prod.values[p] *= generators_[j][p];

    Symbol out(static_cast<const MatrixField&>(forward_transform(prod, sigma_.dual())));
    validity_after(sigma_, alpha, out);
    if (out.valid_count() == 0) throw PreconditionError(margin_message(dual, 1.0, k));
    if (output_cutoff) {
        for (std::size_t i = 0; i < dual.size(); ++i)
            if (dual[i].bracket <= *output_cutoff && !out.valid(i))
                throw PreconditionError(margin_message(dual, *output_cutoff, k));
        if (dual.cutoff() < *output_cutoff) throw PreconditionError(margin_message(dual, *output_cutoff, k));
    }
    return out;
}

Symbol apply_difference(const Symbol& sigma, const MultiIndex& alpha, std::optional<double> output_cutoff) {
    return DifferenceEngine(sigma, order(alpha)).apply(alpha, output_cutoff);
}

double dual_sobolev_norm(const MatrixField& sigma, double s) {
    if (!(s >= 0.0)) throw PreconditionError("Sobolev order must be nonnegative");
    const DualSlice& dual = sigma.slice();
    const bool integer = s == std::floor(s);
    // |q1^s f|^2 has degree 2 B + s for integer s
    const int extra = static_cast<int>(std::ceil(s / 2.0));
    const auto grid = make_grid(dual.group(), padded_bandlimit(dual, extra), integer ? 1.0 : 2.0);
    FourierCoefficients c(sigma.dual());
    c.data() = sigma.data();
    const auto f = synthesize(c, grid);
    double acc = 0.0;
    for (std::size_t p = 0; p < grid->size(); ++p) {
        const double q1 = geometric_weights(dual.group(), grid->points[p]).q1;
        const double w = s == 0.0 ? 1.0 : std::pow(q1, 2.0 * s);
        acc += grid->weights[p] * w * std::norm(f.values[p]);
    }
    return std::sqrt(acc);
}

double trace_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().sum();
}

int marcinkiewicz_order(const GroupDescriptor& g) { return g.dim / 2 + 1; }

CheckReport check_marcinkiewicz(const Symbol& sigma, std::optional<int> kappa, double threshold) {
    const DualSlice& dual = sigma.slice();
    const int kk = kappa.value_or(marcinkiewicz_order(dual.group()));
    if (kk < 0) throw PreconditionError("kappa must be nonnegative");
    CheckReport r;
    r.condition = "marcinkiewicz";
    r.threshold = threshold;
    r.cutoff = dual.cutoff();
    r.margin = kk;
    const DifferenceEngine engine(sigma, kk);
    double worst = -1.0;
    for (int k = 0; k <= kk; ++k)
        for (const auto& alpha : multi_indices(generator_count(dual.group()), k)) {
            const Symbol d = k == 0 ? sigma : engine.apply(alpha);
            double c = 0.0;
            std::size_t arg = 0;
            std::size_t valid = 0;
            for (std::size_t i = 0; i < dual.size(); ++i) {
                if (!d.valid(i)) continue;
                ++valid;
                const double v = op_norm(d.block(i)) * std::pow(dual[i].bracket, k);
                if (v > c) {
                    c = v;
                    arg = i;
                }
            }
            if (k == kk) r.valid_irreps = valid;
            r.constants.push_back({"alpha=" + multi_index_string(alpha), k, c});
            if (c > worst) {
                worst = c;
                r.worst_irrep = label_string(dual.group(), dual[arg]);
            }
        }
    return finish(std::move(r));
}

CheckReport check_hormander_mihlin(const Symbol& sigma, const LPPartition& partition, std::optional<double> s,
                                   double threshold) {
    const DualSlice& dual = sigma.slice();
    const GroupDescriptor& g = dual.group();
    const double order_s = s.value_or(static_cast<double>(marcinkiewicz_order(g)));
    if (!(order_s > 0.5 * g.dim))
        throw PreconditionError("the Hormander-Mihlin check needs s > n/2 (s = " + fmt_double(order_s) +
                                ", n = " + std::to_string(g.dim) + ")");
    CheckReport r;
    r.condition = "hormander_mihlin";
    r.threshold = threshold;
    r.cutoff = dual.cutoff();
    r.margin = static_cast<int>(std::ceil(order_s));
    r.valid_irreps = dual.size();
    const double linf = sigma.linf_norm();
    r.constants.push_back({"linf", 0, linf});
    // only windows whose support [r/2, 2r] fits inside the slice; truncated
    // windows pick up a spurious edge
    const int j_max = static_cast<int>(std::floor(2.0 * std::log2(dual.cutoff() / 2.0) + 1e-9));
    if (j_max < 0) throw PreconditionError("the Hormander-Mihlin check needs a cutoff of at least 2");
    double worst = -1.0;
    for (int j = 0; j <= j_max; ++j) {
        const double radius = std::exp2(0.5 * j);
        // the window vanishes beyond <xi> = 2 r
        const auto window_dual = enumerate_dual(g, std::min(dual.cutoff(), 2.0 * radius));
        FourierCoefficients windowed = transfer_to_slice(sigma, window_dual);
        for (std::size_t i = 0; i < window_dual->size(); ++i)
            windowed.block(i) *= partition.eta((*window_dual)[i].bracket / radius);
        const double v = std::pow(radius, order_s - 0.5 * g.dim) * dual_sobolev_norm(windowed, order_s);
        r.constants.push_back({"r=2^(" + std::to_string(j) + "/2)", static_cast<int>(std::ceil(order_s)), linf + v});
        if (v > worst) {
            worst = v;
            r.worst_irrep = "r=2^(" + std::to_string(j) + "/2)";
        }
    }
    return finish(std::move(r));
}

CheckReport check_weak_marcinkiewicz(const Symbol& sigma, int s0, double threshold) {
    const DualSlice& dual = sigma.slice();
    const GroupDescriptor& g = dual.group();
    if (s0 < 0 || s0 > g.dim) throw PreconditionError("s0 must be an integer in [0, n]");
    CheckReport r;
    r.condition = "weak_marcinkiewicz";
    r.threshold = threshold;
    r.cutoff = dual.cutoff();
    r.margin = s0;
    const DifferenceEngine engine(sigma, s0);
    std::vector<Symbol> diffs;
    for (const auto& alpha : multi_indices(generator_count(g), s0))
        diffs.push_back(s0 == 0 ? sigma : engine.apply(alpha));

    double worst = -1.0;
    for (int j = 1; std::exp2(j) <= dual.cutoff() * (1.0 + 1e-12); ++j) {
        const double lo = std::exp2(j - 1), hi = std::exp2(j);
        bool complete = true;
        double lhs = 0.0, top = -1.0;
        std::size_t top_i = 0, count = 0;
        for (std::size_t i = 0; i < dual.size() && complete; ++i) {
            const auto& xi = dual[i];
            if (xi.bracket < lo || xi.bracket >= hi) continue;
            ++count;
            double contrib = 0.0;
            for (const auto& d : diffs) {
                if (!d.valid(i)) complete = false;
                contrib += xi.dim * trace_norm(d.block(i));
            }
            lhs += contrib;
            if (contrib > top) {
                top = contrib;
                top_i = i;
            }
        }
        if (!complete || count == 0) continue;
        r.valid_irreps += count;
        const double v = lhs * std::exp2(-j * static_cast<double>(g.dim - s0));
        r.constants.push_back({"j=" + std::to_string(j), s0, v});
        if (v > worst) {
            worst = v;
            r.worst_irrep = label_string(g, dual[top_i]);
        }
    }
    if (r.constants.empty())
        throw PreconditionError("no complete dyadic block survives: " + margin_message(dual, 2.0, s0));
    return finish(std::move(r));
}

}  // namespace gfm
