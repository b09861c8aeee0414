#pragma once

// Symbols on a dual slice, difference operators realized through the group
// side (Delta_q sigma = (q f)^ with f the inverse transform of sigma), dual
// Sobolev norms and the three symbol-condition checkers.
//
// Generators: torus q_j(x) = e^{-2 pi i x_j} - 1, so Delta_j sigma(xi) =
// sigma(xi + e_j) - sigma(xi). SU(2): q_ij = xi0(x)_ij - delta_ij for the
// fundamental representation in the standard spin basis, generator index
// 2 i + j.

#include "gfm/fourier.hpp"
#include "gfm/spaces.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gfm {

struct ScalarProfile {
    enum class Kind { Constant, PowerIt, Wave, Sign, Window, DyadicRademacher };

    Kind kind = Kind::Constant;
    double t = 0.0;          ///< PowerIt exponent, Constant value
    int ell = 0;             ///< Window index
    std::uint64_t seed = 0;  ///< DyadicRademacher

    static ScalarProfile constant(double c = 1.0);
    static ScalarProfile power_it(double t);
    static ScalarProfile wave();
    static ScalarProfile sign();
    static ScalarProfile window(int ell);
    static ScalarProfile dyadic_rademacher(std::uint64_t seed);

    /// "power_it(t=5)", "wave", ...
    std::string name() const;
    /// g(lambda) for lambda >= 1. Throws PreconditionError for Sign, which is label based.
    cd operator()(double lambda) const;
};

/// {type: "power_it", t}, {type: "wave"}, {type: "sign"}, {type: "window", ell},
/// {type: "dyadic_rademacher", seed}, {type: "constant", value}.
ScalarProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const ScalarProfile& p);

/// A symbol plus per-irrep validity: entries computed from truncated data are
/// marked invalid and ignored by the checkers.
class Symbol : public MatrixField {
public:
    Symbol() = default;
    explicit Symbol(DualPtr dual);
    explicit Symbol(const MatrixField& field);

    bool valid(std::size_t i) const { return valid_[i] != 0; }
    void set_valid(std::size_t i, bool v) { valid_[i] = v ? 1 : 0; }
    std::size_t valid_count() const;

    /// sup over the slice of the largest singular value.
    double linf_norm() const;

    FourierCoefficients as_coefficients() const;

private:
    std::vector<char> valid_;
};

Symbol identity_symbol(const DualPtr& dual);
/// sigma(xi) = g(<xi>) I. Sign uses sign(xi) on torus(1) and is rejected elsewhere.
Symbol build_spectral_symbol(const ScalarProfile& g, const DualPtr& dual);
/// Per-irrep product sigma(xi) tau(xi).
Symbol multiply_symbols(const Symbol& a, const Symbol& b);

/// Multi-index over the generator list.
using MultiIndex = std::vector<int>;

int generator_count(const GroupDescriptor& g);
std::vector<cd> generator_values(const GroupDescriptor& g, const GroupPoint& x);
int order(const MultiIndex& alpha);
/// All multi-indices with |alpha| = k, lexicographically descending.
std::vector<MultiIndex> multi_indices(int generators, int k);
std::string multi_index_string(const MultiIndex& alpha);

/// Cutoff a symbol needs so that every irrep with <xi> <= output_cutoff stays
/// valid after differences of total order k.
double required_cutoff(const GroupDescriptor& g, double output_cutoff, int k);

/// Samples the inverse transform of a symbol once on a grid exact for every
/// difference up to max_order and applies q^alpha on demand.
class DifferenceEngine {
public:
    DifferenceEngine(const Symbol& sigma, int max_order);

    /// Delta^alpha sigma. Throws PreconditionError with the required cutoff when
    /// no irrep remains valid, or when output_cutoff is given and not covered.
    Symbol apply(const MultiIndex& alpha, std::optional<double> output_cutoff = std::nullopt) const;

    const Symbol& symbol() const { return sigma_; }
    int max_order() const { return max_order_; }

private:
    Symbol sigma_;
    int max_order_;
    GridPtr grid_;
    GridFunction samples_;
    std::vector<std::vector<cd>> generators_;  // per generator, per grid point
};

Symbol apply_difference(const Symbol& sigma, const MultiIndex& alpha,
                        std::optional<double> output_cutoff = std::nullopt);

/// ||q1^s f||_{L^2} with f the inverse transform of sigma.
double dual_sobolev_norm(const MatrixField& sigma, double s);

/// Sum of singular values; 0 for a zero matrix.
double trace_norm(const Eigen::MatrixXcd& m);

struct CheckReport {
    struct Constant {
        std::string name;  ///< e.g. "alpha=(1,0)", "r=2^(3/2)", "j=4"
        int order = 0;
        double value = 0.0;
    };
    std::string condition;
    std::vector<Constant> constants;
    double headline = 0.0;
    std::string worst_irrep;
    double threshold = std::numeric_limits<double>::infinity();
    bool passed = true;
    double cutoff = 0.0;
    int margin = 0;
    std::size_t valid_irreps = 0;
};

/// floor(n/2) + 1
int marcinkiewicz_order(const GroupDescriptor& g);

/// C_alpha = sup over valid xi of ||D^alpha sigma(xi)||_op <xi>^{|alpha|}, |alpha| <= kappa.
CheckReport check_marcinkiewicz(const Symbol& sigma, std::optional<int> kappa = std::nullopt,
                                double threshold = std::numeric_limits<double>::infinity());

/// ||sigma||_inf + sup_r r^{s - n/2} ||sigma eta(<xi>/r)||_{H^s}, r = 2^{j/2} with
/// the window support [r/2, 2r] inside the slice.
CheckReport check_hormander_mihlin(const Symbol& sigma, const LPPartition& partition,
                                   std::optional<double> s = std::nullopt,
                                   double threshold = std::numeric_limits<double>::infinity());

/// Per dyadic block 2^{j-1} <= <xi> < 2^j:
///   2^{-j(n - s0)} sum_{|alpha| = s0} sum_{xi in block} d_xi Tr|Delta^alpha sigma(xi)|.
/// Only blocks lying inside the slice with every irrep valid are reported.
CheckReport check_weak_marcinkiewicz(const Symbol& sigma, int s0,
                                     double threshold = std::numeric_limits<double>::infinity());

}  // namespace gfm
