#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latdef/error.hpp"

namespace latdef {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A simple lattice in R^d given by the columns of its basis matrix.
class Lattice {
 public:
  /// Throws SingularBasis when |det| < 1e-14 * (max column norm)^d.
  static Lattice from_basis(Matrix basis);

  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }
  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& inverse() const noexcept { return inverse_; }
  double volume() const noexcept { return volume_; }

  Vector column(int i) const { return basis_.col(i); }
  Vector point(const std::vector<std::int64_t>& coords) const;

  /// Half the sum of basis vector lengths. Every point of the closed unit
  /// cell centred at the origin lies within this distance of it.
  double cell_radius() const noexcept;

 private:
  Lattice(Matrix basis, Matrix gram, Matrix inverse, double volume)
      : basis_(std::move(basis)), gram_(std::move(gram)),
        inverse_(std::move(inverse)), volume_(volume) {}

  Matrix basis_;
  Matrix gram_;
  Matrix inverse_;
  double volume_;
};

enum class NamedLattice { Z1, Z2, Z3, A2, D3, D3star };

NamedLattice parse_named_lattice(const std::string& name);
std::string to_string(NamedLattice name);

/// Named lattice rescaled to the requested cell volume.
Lattice named(NamedLattice name, double volume = 1.0);

/// Lagrange-Gauss reduction with g12 >= 0.
Lattice reduce2d(const Lattice& L);

/// Basis^{-T}.
Lattice dual(const Lattice& L);

Lattice scaled(const Lattice& L, double t);

/// Half the sum of the basis vectors. The basis should already be reduced.
Vector cell_center(const Lattice& L);

struct Param2D {
  double x = 0.5;
  double y = 0.8660254037844386;
  double V = 1.0;
};

/// (V/y)^{1/2} [Z(1,0) + Z(x,y)]
Lattice param_to_lattice(const Param2D& p);

/// Reduces and maps to x in [0, 1/2], x^2 + y^2 >= 1.
Param2D lattice_to_param(const Lattice& L);

/// Canonical representative of an arbitrary (x, y > 0) point.
Param2D canonical_param(const Param2D& p);

bool in_fundamental_domain(const Param2D& p, double eps = 1e-12);

struct EnumeratedPoint {
  std::vector<std::int64_t> coords;
  Vector position;  // B m + center
};

/// All B m + center with norm <= radius, in lexicographic order of m.
/// Throws CapExceeded when more than max_points would be returned.
std::vector<EnumeratedPoint> enumerate(
    const Lattice& L, const Vector& center, double radius,
    std::int64_t max_points = std::numeric_limits<std::int64_t>::max());

enum class ShapeClass { Triangular, Square, Rectangular, Rhombic, Generic };

std::string to_string(ShapeClass s);
ShapeClass parse_shape(const std::string& s);

inline constexpr double kShapeTol = 1e-4;

ShapeClass classify_shape(const Param2D& p, double tol = kShapeTol);
ShapeClass classify_shape(const Lattice& L, double tol = kShapeTol);

}  // namespace latdef
