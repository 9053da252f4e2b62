#include "chdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace chdg {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::interior: return "interior";
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::neumann: return "neumann";
    case BoundaryKind::robin: return "robin";
    case BoundaryKind::untagged: return "untagged";
  }
  return "unknown";
}

int TriangleMesh::num_boundary_faces() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(),
                                        [](const Face& f) { return f.is_boundary(); }));
}

FaceSide TriangleMesh::neighbor(int element, int local_face) const {
  const Face& f = face_of(element, local_face);
  if (f.num_sides != 2) throw MeshError("neighbor requested on a boundary face");
  const FaceSide& s0 = f.sides[0];
  return (s0.element == element && s0.local_face == local_face) ? f.sides[1] : s0;
}

Point TriangleMesh::face_point(int face, double t) const {
  const Face& f = faces[static_cast<std::size_t>(face)];
  return (1.0 - t) * vertices[f.vertices[0]] + t * vertices[f.vertices[1]];
}

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

std::pair<int, int> sorted_pair(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

TriangleMesh build_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                        const std::vector<TaggedEdge>& tagged, BoundaryKind default_kind) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const int nv = static_cast<int>(mesh.vertices.size());
  const int ne = mesh.num_elements();

  mesh.element_faces.assign(static_cast<std::size_t>(ne), {-1, -1, -1});
  mesh.normals.resize(static_cast<std::size_t>(ne));
  mesh.reversed.resize(static_cast<std::size_t>(ne));
  mesh.areas.resize(static_cast<std::size_t>(ne));

  std::map<std::pair<int, int>, int> face_index;
  for (int k = 0; k < ne; ++k) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(k)];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        std::ostringstream os;
        os << "triangle " << k << ": vertex index out of range (" << v << ")";
        throw MeshError(os.str());
      }
    }
    mesh.areas[k] = signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    for (int f = 0; f < 3; ++f) {
      const int a = tri[f];
      const int b = tri[(f + 1) % 3];
      const auto key = sorted_pair(a, b);
      auto [it, inserted] = face_index.try_emplace(key, mesh.num_faces());
      if (inserted) {
        Face face;
        face.vertices = {key.first, key.second};
        face.length = (mesh.vertices[b] - mesh.vertices[a]).norm();
        mesh.faces.push_back(face);
      }
      Face& face = mesh.faces[static_cast<std::size_t>(it->second)];
      if (face.num_sides == 2) {
        std::ostringstream os;
        os << "non-conforming connectivity: face (" << key.first << ", " << key.second
           << ") has more than two owners";
        throw MeshError(os.str());
      }
      face.sides[static_cast<std::size_t>(face.num_sides++)] = {k, f};
      mesh.element_faces[k][f] = it->second;
      mesh.reversed[k][f] = a > b;
      const Point d = mesh.vertices[b] - mesh.vertices[a];
      mesh.normals[k][f] = Point(d.y(), -d.x()) / d.norm();
    }
  }

  for (Face& face : mesh.faces) {
    face.kind = face.num_sides == 2 ? BoundaryKind::interior : default_kind;
  }
  for (const TaggedEdge& e : tagged) {
    auto it = face_index.find(sorted_pair(e.a, e.b));
    if (it == face_index.end()) {
      std::ostringstream os;
      os << "non-conforming connectivity: boundary edge (" << e.a << ", " << e.b
         << ") is not an edge of any triangle";
      throw MeshError(os.str());
    }
    Face& face = mesh.faces[static_cast<std::size_t>(it->second)];
    if (!face.is_boundary()) {
      std::ostringstream os;
      os << "non-conforming connectivity: boundary edge (" << e.a << ", " << e.b
         << ") is an interior face";
      throw MeshError(os.str());
    }
    face.kind = e.kind;
  }

  double h = 0.0;
  for (const Face& f : mesh.faces) h = std::max(h, f.length);
  mesh.h_char = h;
  return mesh;
}

TriangleMesh generate_rectangle(double lx, double ly, int nx, int ny, const SideTags& tags) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_rectangle: nx and ny must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("generate_rectangle: degenerate dimensions");

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(lx * static_cast<double>(i) / nx, ly * static_cast<double>(j) / ny);

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  std::vector<TaggedEdge> tagged;
  for (int i = 0; i < nx; ++i) {
    tagged.push_back({id(i, 0), id(i + 1, 0), tags.bottom});
    tagged.push_back({id(i, ny), id(i + 1, ny), tags.top});
  }
  for (int j = 0; j < ny; ++j) {
    tagged.push_back({id(0, j), id(0, j + 1), tags.left});
    tagged.push_back({id(nx, j), id(nx, j + 1), tags.right});
  }
  return build_mesh(std::move(vertices), std::move(triangles), tagged);
}

TriangleMesh generate_structured_unit_square(int n, const SideTags& tags) {
  if (n < 1) throw std::invalid_argument("generate_structured_unit_square: n must be >= 1");
  return generate_rectangle(1.0, 1.0, n, n, tags);
}

ValidationReport validate(const TriangleMesh& mesh) {
  auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
  const int ne = mesh.num_elements();
  const int nv = static_cast<int>(mesh.vertices.size());

  for (int k = 0; k < ne; ++k) {
    const auto& t = mesh.triangles[k];
    for (int v : t)
      if (v < 0 || v >= nv) return fail("vertex index out of range in triangle " + std::to_string(k));
    if (signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) <= 0.0)
      return fail("negative area in triangle " + std::to_string(k));
  }

  int boundary = 0;
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.num_sides < 1 || f.num_sides > 2) return fail("face " + std::to_string(fi) + " owner count");
    if (f.num_sides == 1) {
      ++boundary;
      if (f.kind == BoundaryKind::interior)
        return fail("boundary face " + std::to_string(fi) + " tagged interior");
    } else if (f.kind != BoundaryKind::interior) {
      return fail("interior face " + std::to_string(fi) + " carries a boundary tag");
    }
    for (int s = 0; s < f.num_sides; ++s) {
      const FaceSide& side = f.sides[s];
      if (mesh.element_faces[side.element][side.local_face] != fi)
        return fail("incidence mismatch on face " + std::to_string(fi));
    }
    if (f.num_sides == 2) {
      const Point& n0 = mesh.normals[f.sides[0].element][f.sides[0].local_face];
      const Point& n1 = mesh.normals[f.sides[1].element][f.sides[1].local_face];
      if (std::abs(n0.x() + n1.x()) > 1e-14 || std::abs(n0.y() + n1.y()) > 1e-14)
        return fail("normal antisymmetry violated on face " + std::to_string(fi));
    }
  }

  for (int k = 0; k < ne; ++k)
    for (int f = 0; f < 3; ++f)
      if (std::abs(mesh.normals[k][f].norm() - 1.0) > 1e-14)
        return fail("non-unit normal on element " + std::to_string(k));

  const int interior = mesh.num_faces() - boundary;
  if (3 * ne != boundary + 2 * interior) return fail("face counting identity 3 N_tri = N_bnd + 2 N_int");
  return {};
}

AffineMap affine_map(const TriangleMesh& mesh, int element) {
  const auto& t = mesh.triangles[static_cast<std::size_t>(element)];
  AffineMap m;
  m.origin = mesh.vertices[t[0]];
  m.jacobian.col(0) = mesh.vertices[t[1]] - m.origin;
  m.jacobian.col(1) = mesh.vertices[t[2]] - m.origin;
  m.det = m.jacobian.determinant();
  m.inverse = m.jacobian.inverse();
  return m;
}

PointLocator::PointLocator(const TriangleMesh& mesh) : mesh_(&mesh) {
  lo_ = Point::Constant(std::numeric_limits<double>::max());
  hi_ = Point::Constant(std::numeric_limits<double>::lowest());
  for (const Point& v : mesh.vertices) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const int ne = mesh.num_elements();
  const int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(ne))));
  const Point ext = hi_ - lo_;
  const double aspect = ext.y() > 0.0 ? ext.x() / ext.y() : 1.0;
  nx_ = std::max(1, static_cast<int>(side * std::sqrt(aspect)));
  ny_ = std::max(1, static_cast<int>(side / std::sqrt(aspect)));
  buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  auto cell = [&](double v, double lo, double ext_, int n) {
    const int c = ext_ > 0.0 ? static_cast<int>((v - lo) / ext_ * n) : 0;
    return std::clamp(c, 0, n - 1);
  };
  for (int k = 0; k < ne; ++k) {
    Point bl = Point::Constant(std::numeric_limits<double>::max());
    Point tr = Point::Constant(std::numeric_limits<double>::lowest());
    for (int v : mesh.triangles[k]) {
      bl = bl.cwiseMin(mesh.vertices[v]);
      tr = tr.cwiseMax(mesh.vertices[v]);
    }
    for (int j = cell(bl.y(), lo_.y(), ext.y(), ny_); j <= cell(tr.y(), lo_.y(), ext.y(), ny_); ++j)
      for (int i = cell(bl.x(), lo_.x(), ext.x(), nx_); i <= cell(tr.x(), lo_.x(), ext.x(), nx_); ++i)
        buckets_[static_cast<std::size_t>(j * nx_ + i)].push_back(k);
  }
}

std::optional<PointLocator::Location> PointLocator::locate(const Point& x) const {
  constexpr double tol = 1e-12;
  const Point ext = hi_ - lo_;
  if (x.x() < lo_.x() - tol || x.y() < lo_.y() - tol || x.x() > hi_.x() + tol || x.y() > hi_.y() + tol)
    return std::nullopt;
  const int i = std::clamp(ext.x() > 0 ? static_cast<int>((x.x() - lo_.x()) / ext.x() * nx_) : 0, 0, nx_ - 1);
  const int j = std::clamp(ext.y() > 0 ? static_cast<int>((x.y() - lo_.y()) / ext.y() * ny_) : 0, 0, ny_ - 1);
  for (int k : buckets_[static_cast<std::size_t>(j * nx_ + i)]) {
    const AffineMap m = affine_map(*mesh_, k);
    const Point xi = m.to_reference(x);
    if (xi.x() >= -tol && xi.y() >= -tol && xi.x() + xi.y() <= 1.0 + tol) return Location{k, xi};
  }
  return std::nullopt;
}

}  // namespace chdg
