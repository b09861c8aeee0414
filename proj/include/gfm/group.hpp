#pragma once

// Concrete compact groups (tori of dimension <= 3 and SU(2)), their points,
// product quadrature grids and the weight functions built from the group law.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gfm {

enum class GroupKind { Torus, SU2 };

/// Which group we work on. Haar measure is always normalized to total mass 1.
struct GroupDescriptor {
    GroupKind kind = GroupKind::Torus;
    int dim = 1;
    double haar_mass = 1.0;

    bool is_torus() const { return kind == GroupKind::Torus; }
    bool is_su2() const { return kind == GroupKind::SU2; }
    bool operator==(const GroupDescriptor&) const = default;
};

inline constexpr int kMaxTorusDim = 3;

/// Throws ConfigError for n outside [1, 3] on the torus. `n` is ignored for SU(2).
GroupDescriptor make_group(GroupKind kind, int n = 1);
/// Accepts "torus" or "su2".
GroupDescriptor make_group(std::string_view kind, int n = 1);
/// "torus1", "torus2", "torus3" or "su2"; stable, used in reports.
std::string group_name(const GroupDescriptor& g);

/// Torus: the first `dim` coordinates in [0,1).
/// SU(2): Euler angles (alpha, beta, gamma), alpha in [0,2pi), beta in [0,pi], gamma in [0,4pi).
struct GroupPoint {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    double alpha() const { return c[0]; }
    double beta() const { return c[1]; }
    double gamma() const { return c[2]; }
};

GroupPoint identity_point(const GroupDescriptor& g);

/// Reduces coordinates into the canonical ranges. For SU(2) the angles are
/// round-tripped through the fundamental matrix, so any real triple is accepted.
GroupPoint canonicalize(const GroupDescriptor& g, const GroupPoint& x);

GroupPoint multiply(const GroupDescriptor& g, const GroupPoint& x, const GroupPoint& y);
GroupPoint inverse(const GroupDescriptor& g, const GroupPoint& x);

enum class PointOp { Multiply, Inverse };
/// `y` is ignored for Inverse.
GroupPoint point_op(const GroupDescriptor& g, PointOp op, const GroupPoint& x,
                    const GroupPoint& y = {});

/// Fundamental (spin 1/2) matrix [[a, -conj b], [b, conj a]] with
/// a = e^{-i(alpha+gamma)/2} cos(beta/2), b = e^{i(alpha-gamma)/2} sin(beta/2).
Eigen::Matrix2cd su2_matrix(const GroupPoint& x);

/// Inverse of su2_matrix. At beta in {0, pi} only one angle combination is
/// determined; the remaining freedom is fixed by putting the rotation into
/// alpha and leaving gamma in {0, 2pi} (2pi only when needed to select the sheet).
GroupPoint su2_from_matrix(const Eigen::Matrix2cd& u);

/// Rotation half-angle theta in [0, pi] with Tr(u) = 2 cos(theta).
double su2_angle(const GroupPoint& x);

struct GeometricWeights {
    double distance = 0.0;  ///< geodesic distance |x| to the identity
    double rho_sq = 0.0;    ///< dim(G) - Tr Ad(x); identically 0 on tori
    double q1 = 0.0;        ///< first-order weight, zero only at the identity
};

GeometricWeights geometric_weights(const GroupDescriptor& g, const GroupPoint& x);

/// Largest geodesic distance to the identity: pi*sqrt(n) on T^n, pi on SU(2).
double diameter(const GroupDescriptor& g);

/// Tensor-product quadrature on the group.
///
/// Torus: N equispaced nodes per axis, point index is row-major with the last
/// coordinate fastest. SU(2): axes are (alpha, beta, gamma) with index
/// (b * n_alpha + a) * n_gamma + c, i.e. beta slowest and gamma fastest; beta
/// nodes are Gauss-Legendre in cos(beta).
struct QuadratureGrid {
    GroupDescriptor group;
    double bandlimit = 0.0;
    std::vector<GroupPoint> points;
    std::vector<double> weights;
    /// Per-axis node coordinates and 1-D weights (each axis' weights sum to 1).
    std::vector<std::vector<double>> axis_nodes;
    std::vector<std::vector<double>> axis_weights;

    std::size_t size() const { return points.size(); }
    std::size_t axis_size(std::size_t axis) const { return axis_nodes.at(axis).size(); }
};

/// Grid that integrates products of two matrix coefficients with labels up to
/// `bandlimit` exactly. Torus: bandlimit bounds every |xi_j| and the grid has
/// 2*ceil(bandlimit)+1 nodes per axis. SU(2): bandlimit is the largest spin,
/// with 4*bandlimit+2 nodes in alpha and gamma and 2*bandlimit+1 in cos(beta).
/// `oversample` >= 1 multiplies every axis count (reference quadratures).
QuadratureGrid build_grid(const GroupDescriptor& g, double bandlimit, double oversample = 1.0);

}  // namespace gfm
