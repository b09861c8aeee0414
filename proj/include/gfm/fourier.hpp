#pragma once

// Matrix-valued Fourier transform on a dual slice:
//   fhat(xi) = int_G f(x) xi(x)^* dx,   f(x) = sum_xi d_xi Tr(xi(x) fhat(xi)).
//
// Convolution convention (fixed across the library): right convolution
//   (f * k)(x) = int_G f(y) k(y^{-1} x) dy,   (f * k)^(xi) = khat(xi) fhat(xi).

#include "gfm/dual.hpp"
#include "gfm/group.hpp"

#include <Eigen/Core>
#include "json.hpp"

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gfm {

using cd = std::complex<double>;
using GridPtr = std::shared_ptr<const QuadratureGrid>;

GridPtr make_grid(const GroupDescriptor& g, double bandlimit, double oversample = 1.0);

/// One d_xi x d_xi complex block per irrep of a slice, stored contiguously
/// (column-major blocks, concatenated in slice order).
class MatrixField {
public:
    MatrixField() = default;
    explicit MatrixField(DualPtr dual);

    const DualPtr& dual() const { return dual_; }
    const DualSlice& slice() const { return *dual_; }
    std::size_t size() const { return dual_ ? dual_->size() : 0; }

    Eigen::Map<Eigen::MatrixXcd> block(std::size_t i);
    Eigen::Map<const Eigen::MatrixXcd> block(std::size_t i) const;

    std::vector<cd>& data() { return data_; }
    const std::vector<cd>& data() const { return data_; }

    /// True when both fields live on the same slice (same object or equal content).
    bool same_slice(const MatrixField& other) const;
    /// Every block is c * I (exactly).
    bool is_central() const;

protected:
    DualPtr dual_;
    std::vector<cd> data_;
};

class FourierCoefficients : public MatrixField {
public:
    using MatrixField::MatrixField;
};

/// Samples of a function on the points of a grid.
struct GridFunction {
    GridPtr grid;
    std::vector<cd> values;

    GridFunction() = default;
    explicit GridFunction(GridPtr g) : grid(std::move(g)), values(grid->size(), cd{}) {}
};

/// Quadrature of the matrix-valued transform. Exact for functions in the span
/// of matrix coefficients up to the grid bandlimit.
/// Throws PreconditionError when the grid bandlimit is below the slice's max label.
FourierCoefficients forward_transform(const GridFunction& f, const DualPtr& dual);

/// f(x) = sum_xi d_xi Tr(xi(x) fhat(xi)) at arbitrary points.
std::vector<cd> inverse_evaluate(const FourierCoefficients& coeffs, std::span<const GroupPoint> points);
cd inverse_evaluate(const FourierCoefficients& coeffs, const GroupPoint& point);

/// inverse_evaluate on every grid point, using the tensor structure of the grid.
GridFunction synthesize(const FourierCoefficients& coeffs, const GridPtr& grid);

/// (sum_xi d_xi ||fhat(xi)||_HS^2)^{1/2}
double plancherel_norm(const MatrixField& coeffs);
/// sum_xi d_xi Tr(fhat(xi) ghat(xi)^*), the L^2 inner product by Parseval.
cd plancherel_inner(const MatrixField& f, const MatrixField& g);

/// Coefficients of the right convolution f * g: ghat(xi) fhat(xi).
FourierCoefficients convolve(const FourierCoefficients& f, const FourierCoefficients& g);

/// Coefficients of x -> f(z x): fhat(xi) xi(z).
FourierCoefficients left_translate(const FourierCoefficients& f, const GroupPoint& z);

/// Copies the blocks of irreps present in both slices; zero elsewhere.
FourierCoefficients transfer_to_slice(const MatrixField& field, const DualPtr& target);

/// Quadrature inner product sum_x w(x) f(x) conj(g(x)).
cd grid_inner(const GridFunction& f, const GridFunction& g);

/// max |forward(synthesize(f)) - f| entrywise on a grid fine enough for the slice.
double roundtrip_error(const FourierCoefficients& coeffs, const GridPtr& grid);
/// | ||f||_{L^2(grid)} - ||fhat||_HS | / ||fhat||_HS; 0 for f = 0.
double plancherel_residual(const FourierCoefficients& coeffs, const GridPtr& grid);

/// Coefficient / symbol files. `role` is "coefficients" or "symbol".
nlohmann::json coefficients_to_json(const MatrixField& field, const std::string& role);
/// Rebuilds the slice from the stored group and cutoff and checks the labels.
FourierCoefficients coefficients_from_json(const nlohmann::json& j);

}  // namespace gfm
