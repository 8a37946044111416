#include "latdef/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lattice_walk.hpp"

namespace latdef {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NoDensity: return "NoDensity";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ShiftConditionViolated: return "ShiftConditionViolated";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::ObjectiveFailure: return "ObjectiveFailure";
  }
  return "Unknown";
}

Lattice Lattice::from_basis(Matrix basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw Error(ErrorKind::InvalidArgument, "basis must be a nonempty square matrix");
  if (!basis.allFinite())
    throw Error(ErrorKind::InvalidArgument, "basis has non-finite entries");
  const int d = static_cast<int>(basis.cols());
  double maxnorm = 0.0;
  for (int i = 0; i < d; ++i) maxnorm = std::max(maxnorm, basis.col(i).norm());
  const double det = basis.determinant();
  if (!(std::abs(det) >= 1e-14 * std::pow(maxnorm, d)) || maxnorm == 0.0)
    throw Error(ErrorKind::SingularBasis, "basis vectors are linearly dependent");
  Matrix gram = basis.transpose() * basis;
  Matrix inv = basis.inverse();
  return Lattice(std::move(basis), std::move(gram), std::move(inv), std::abs(det));
}

Vector Lattice::point(const std::vector<std::int64_t>& coords) const {
  if (static_cast<int>(coords.size()) != dim())
    throw Error(ErrorKind::InvalidArgument, "coordinate vector has wrong length");
  Vector p = Vector::Zero(dim());
  for (int i = 0; i < dim(); ++i) p += static_cast<double>(coords[i]) * basis_.col(i);
  return p;
}

double Lattice::cell_radius() const noexcept {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += basis_.col(i).norm();
  return 0.5 * s;
}

NamedLattice parse_named_lattice(const std::string& name) {
  if (name == "Z1") return NamedLattice::Z1;
  if (name == "Z2") return NamedLattice::Z2;
  if (name == "Z3") return NamedLattice::Z3;
  if (name == "A2") return NamedLattice::A2;
  if (name == "D3") return NamedLattice::D3;
  if (name == "D3star") return NamedLattice::D3star;
  throw Error(ErrorKind::InvalidArgument, "unknown lattice name '" + name + "'");
}

std::string to_string(NamedLattice name) {
  switch (name) {
    case NamedLattice::Z1: return "Z1";
    case NamedLattice::Z2: return "Z2";
    case NamedLattice::Z3: return "Z3";
    case NamedLattice::A2: return "A2";
    case NamedLattice::D3: return "D3";
    case NamedLattice::D3star: return "D3star";
  }
  return "?";
}

namespace {

Matrix fcc_basis() {
  Matrix B(3, 3);
  B << 1, 0, 1,
       0, 1, 1,
       1, 1, 0;
  return B;
}

}  // namespace

Lattice named(NamedLattice name, double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw Error(ErrorKind::InvalidArgument, "volume must be positive");
  Matrix B;
  switch (name) {
    case NamedLattice::Z1: B = Matrix::Identity(1, 1); break;
    case NamedLattice::Z2: B = Matrix::Identity(2, 2); break;
    case NamedLattice::Z3: B = Matrix::Identity(3, 3); break;
    case NamedLattice::A2:
      B.resize(2, 2);
      B << 1.0, 0.5,
           0.0, std::sqrt(3.0) / 2.0;
      break;
    case NamedLattice::D3: B = fcc_basis(); break;
    case NamedLattice::D3star: B = fcc_basis().inverse().transpose(); break;
  }
  const int d = static_cast<int>(B.cols());
  const double t = std::pow(volume / std::abs(B.determinant()), 1.0 / d);
  return Lattice::from_basis(t * B);
}

Lattice reduce2d(const Lattice& L) {
  if (L.dim() != 2) throw Error(ErrorKind::InvalidArgument, "reduce2d needs d = 2");
  Eigen::Vector2d u = L.basis().col(0);
  Eigen::Vector2d v = L.basis().col(1);
  if (v.squaredNorm() < u.squaredNorm()) std::swap(u, v);
  for (int iter = 0; iter < 10000; ++iter) {
    const double r = u.dot(v) / u.squaredNorm();
    if (std::abs(r) > 0.5) v -= std::round(r) * u;
    if (v.squaredNorm() < u.squaredNorm()) {
      std::swap(u, v);
      continue;
    }
    break;
  }
  if (u.dot(v) < 0.0) v = -v;
  Matrix B(2, 2);
  B.col(0) = u;
  B.col(1) = v;
  return Lattice::from_basis(B);
}

Lattice dual(const Lattice& L) { return Lattice::from_basis(L.inverse().transpose()); }

Lattice scaled(const Lattice& L, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  return Lattice::from_basis(t * L.basis());
}

Vector cell_center(const Lattice& L) { return 0.5 * L.basis().rowwise().sum(); }

Lattice param_to_lattice(const Param2D& p) {
  if (!(p.y > 0.0) || !(p.V > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error(ErrorKind::InvalidArgument, "Param2D needs y > 0 and V > 0");
  const double s = std::sqrt(p.V / p.y);
  Matrix B(2, 2);
  B << s, s * p.x,
       0.0, s * p.y;
  return Lattice::from_basis(B);
}

Param2D lattice_to_param(const Lattice& L) {
  const Lattice R = reduce2d(L);
  const Matrix& G = R.gram();
  Param2D p;
  p.V = R.volume();
  p.x = std::clamp(G(0, 1) / G(0, 0), 0.0, 0.5);
  p.y = p.V / G(0, 0);
  return p;
}

Param2D canonical_param(const Param2D& p) { return lattice_to_param(param_to_lattice(p)); }

bool in_fundamental_domain(const Param2D& p, double eps) {
  return p.x >= -eps && p.x <= 0.5 + eps && p.y > 0.0 &&
         p.x * p.x + p.y * p.y >= 1.0 - eps && p.V > 0.0;
}

std::vector<EnumeratedPoint> enumerate(const Lattice& L, const Vector& center, double radius,
                                       std::int64_t max_points) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (center.size() != L.dim())
    throw Error(ErrorKind::InvalidArgument, "center has wrong dimension");
  std::vector<EnumeratedPoint> out;
  const int d = L.dim();
  detail::walk_ball(L, center, radius, [&](const std::int64_t* m, const double* pos, double) {
    if (static_cast<std::int64_t>(out.size()) >= max_points)
      throw Error(ErrorKind::CapExceeded, "enumeration exceeds the point cap");
    EnumeratedPoint e;
    e.coords.assign(m, m + d);
    e.position = Eigen::Map<const Vector>(pos, d);
    out.push_back(std::move(e));
    return true;
  });
  return out;
}

std::string to_string(ShapeClass s) {
  switch (s) {
    case ShapeClass::Triangular: return "Triangular";
    case ShapeClass::Square: return "Square";
    case ShapeClass::Rectangular: return "Rectangular";
    case ShapeClass::Rhombic: return "Rhombic";
    case ShapeClass::Generic: return "Generic";
  }
  return "?";
}

ShapeClass parse_shape(const std::string& s) {
  for (auto c : {ShapeClass::Triangular, ShapeClass::Square, ShapeClass::Rectangular,
                 ShapeClass::Rhombic, ShapeClass::Generic})
    if (to_string(c) == s) return c;
  throw Error(ErrorKind::InvalidArgument, "unknown shape class '" + s + "'");
}

ShapeClass classify_shape(const Param2D& p, double tol) {
  const double x = p.x, y = p.y;
  if (std::abs(x - 0.5) <= tol && std::abs(y - std::sqrt(3.0) / 2.0) <= tol)
    return ShapeClass::Triangular;
  if (std::abs(x) <= tol && std::abs(y - 1.0) <= tol) return ShapeClass::Square;
  if (std::abs(x) <= tol && y > 1.0 + tol) return ShapeClass::Rectangular;
  if (std::abs(x * x + y * y - 1.0) <= tol || std::abs(x - 0.5) <= tol)
    return ShapeClass::Rhombic;
  return ShapeClass::Generic;
}

ShapeClass classify_shape(const Lattice& L, double tol) {
  return classify_shape(lattice_to_param(L), tol);
}

}  // namespace latdef
