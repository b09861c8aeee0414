#pragma once

// Truncations of the unitary dual, Bessel-potential eigenvalues <xi> and
// evaluation of representation matrices.
//
// Eigenvalue normalization: lambda_xi = |xi|^2 on T^n and lambda_l = l(l+1)
// on SU(2), so <xi> = sqrt(1 + lambda_xi).

#include "gfm/group.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gfm {

inline constexpr int kMaxTwiceSpin = 128;  // spins up to 64 are validated

struct IrrepIndex {
    std::array<int, 3> label{0, 0, 0};  ///< torus frequency (entries past dim are 0)
    int twice_spin = 0;                 ///< SU(2): 2l
    int dim = 1;                        ///< d_xi
    double bracket = 1.0;               ///< <xi>

    double spin() const { return 0.5 * twice_spin; }
};

/// Human-readable label: "3", "(1,-2)" or "1/2", "2".
std::string label_string(const GroupDescriptor& g, const IrrepIndex& xi);

/// <xi> for a torus frequency or an SU(2) spin.
double torus_bracket(const std::array<int, 3>& k, int dim);
double su2_bracket(int twice_spin);

/// Irreps with <xi> <= cutoff, sorted by <xi> then by label. Owns the flat
/// block layout shared by coefficient fields on this slice.
class DualSlice {
public:
    DualSlice(GroupDescriptor group, double cutoff);

    const GroupDescriptor& group() const { return group_; }
    double cutoff() const { return cutoff_; }
    std::size_t size() const { return irreps_.size(); }
    const IrrepIndex& operator[](std::size_t i) const { return irreps_[i]; }
    const std::vector<IrrepIndex>& irreps() const { return irreps_; }

    /// Offset of block i in a flat, column-major, block-concatenated array.
    std::size_t offset(std::size_t i) const { return offsets_[i]; }
    std::size_t total_entries() const { return total_entries_; }

    /// Torus: max_j |xi_j| over the slice. SU(2): the largest spin.
    double max_label() const;
    /// SU(2): largest 2l in the slice. Torus: the max |xi_j|.
    int max_label_int() const { return max_label_int_; }

    std::optional<std::size_t> find(const std::array<int, 3>& torus_label) const;
    std::optional<std::size_t> find_spin(int twice_spin) const;
    std::size_t trivial_index() const { return 0; }

private:
    GroupDescriptor group_;
    double cutoff_;
    std::vector<IrrepIndex> irreps_;
    std::vector<std::size_t> offsets_;
    std::size_t total_entries_ = 0;
    int max_label_int_ = 0;
    std::vector<long> torus_lookup_;  // dense box [-B,B]^n -> index or -1
};

using DualPtr = std::shared_ptr<const DualSlice>;

/// Throws PreconditionError for cutoff < 1.
DualPtr enumerate_dual(const GroupDescriptor& g, double cutoff);

/// Slice containing exactly the spins up to l_max (cutoff <l_max>).
DualPtr su2_dual_up_to_spin(double l_max);

/// Wigner small-d matrix d^l(beta), row i <-> m' = l - i, column k <-> m = l - k.
/// Built by repeated spin-1/2 coupling, which only forms convex combinations of
/// bounded quantities and stays accurate for every validated spin.
Eigen::MatrixXd wigner_small_d(int twice_spin, double beta);

/// d^l(beta) for every 2l in [0, twice_spin_max], indexed by 2l.
std::vector<Eigen::MatrixXd> wigner_small_d_all(int twice_spin_max, double beta);

/// Representation matrix xi(x). Torus: the scalar e^{2 pi i x.xi}. SU(2):
/// D^l_{m'm} = e^{-i m' alpha} d^l_{m'm}(beta) e^{-i m gamma}.
/// Throws RangeError above spin 64.
Eigen::MatrixXcd evaluate_irrep(const GroupDescriptor& g, const IrrepIndex& xi, const GroupPoint& x);

/// Trace of xi(x). SU(2): U_{2l}(cos theta) = sin((2l+1)theta)/sin(theta).
std::complex<double> character(const GroupDescriptor& g, const IrrepIndex& xi, const GroupPoint& x);

/// chi_l(theta) for all 2l in [0, twice_spin_max] via the Chebyshev recurrence.
std::vector<double> su2_characters(int twice_spin_max, double cos_theta);

}  // namespace gfm
