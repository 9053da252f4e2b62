#include "chdg/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace chdg {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string expect() {
    std::string line;
    if (!next(line)) fail("unexpected end of file");
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError("line " + std::to_string(number_) + ": " + msg);
  }

  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

BoundaryKind kind_from_name(const std::string& name) {
  const std::string n = lower(name);
  if (n.find("dirichlet") != std::string::npos) return BoundaryKind::dirichlet;
  if (n.find("neumann") != std::string::npos) return BoundaryKind::neumann;
  if (n.find("robin") != std::string::npos) return BoundaryKind::robin;
  return BoundaryKind::untagged;
}

int physical_tag(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::dirichlet: return 1;
    case BoundaryKind::neumann: return 2;
    case BoundaryKind::robin: return 3;
    default: return 0;
  }
}

}  // namespace

TriangleMesh read_mesh(std::istream& in, BoundaryKind default_kind) {
  LineReader reader(in);
  std::unordered_map<long, int> node_index;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 3>> raw_lines;  // node ids + physical tag, resolved later
  std::vector<int> line_numbers;
  std::map<int, BoundaryKind> named_tags;
  bool seen_format = false, seen_nodes = false, seen_elements = false;

  std::string line;
  while (reader.next(line)) {
    const std::string section = trim(line);
    if (section == "$MeshFormat") {
      std::istringstream is(reader.expect());
      double version = 0;
      int file_type = -1;
      if (!(is >> version >> file_type)) reader.fail("malformed $MeshFormat header");
      if (version < 2.0 || version >= 3.0) reader.fail("unsupported MSH version (2.x expected)");
      if (file_type != 0) reader.fail("binary MSH files are not supported");
      if (trim(reader.expect()) != "$EndMeshFormat") reader.fail("expected $EndMeshFormat");
      seen_format = true;
    } else if (section == "$PhysicalNames") {
      std::istringstream cs(reader.expect());
      int count = 0;
      if (!(cs >> count) || count < 0) reader.fail("malformed physical name count");
      for (int i = 0; i < count; ++i) {
        std::istringstream is(reader.expect());
        int dim = 0, tag = 0;
        std::string name;
        if (!(is >> dim >> tag)) reader.fail("malformed physical name");
        std::getline(is, name);
        if (dim == 1) named_tags[tag] = kind_from_name(name);
      }
      if (trim(reader.expect()) != "$EndPhysicalNames") reader.fail("expected $EndPhysicalNames");
    } else if (section == "$Nodes") {
      std::istringstream cs(reader.expect());
      long count = 0;
      if (!(cs >> count) || count < 0) reader.fail("malformed node count");
      vertices.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) {
        std::istringstream is(reader.expect());
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(is >> id >> x >> y >> z)) reader.fail("malformed node record");
        if (!node_index.emplace(id, static_cast<int>(vertices.size())).second)
          reader.fail("duplicate node id " + std::to_string(id));
        vertices.emplace_back(x, y);
      }
      if (trim(reader.expect()) != "$EndNodes") reader.fail("expected $EndNodes");
      seen_nodes = true;
    } else if (section == "$Elements") {
      if (!seen_nodes) reader.fail("$Elements before $Nodes");
      std::istringstream cs(reader.expect());
      long count = 0;
      if (!(cs >> count) || count < 0) reader.fail("malformed element count");
      for (long i = 0; i < count; ++i) {
        std::istringstream is(reader.expect());
        long id = 0;
        int type = 0, ntags = 0;
        if (!(is >> id >> type >> ntags) || ntags < 0) reader.fail("malformed element record");
        std::vector<int> tags(static_cast<std::size_t>(ntags));
        for (int& t : tags)
          if (!(is >> t)) reader.fail("malformed element tags");
        int nnodes = 0;
        switch (type) {
          case 1: nnodes = 2; break;
          case 2: nnodes = 3; break;
          case 15: continue;
          default: reader.fail("unsupported cell type " + std::to_string(type));
        }
        std::array<int, 3> nodes{-1, -1, -1};
        for (int n = 0; n < nnodes; ++n) {
          long nid = 0;
          if (!(is >> nid)) reader.fail("malformed element node list");
          auto it = node_index.find(nid);
          if (it == node_index.end()) reader.fail("vertex index out of range (" + std::to_string(nid) + ")");
          nodes[static_cast<std::size_t>(n)] = it->second;
        }
        if (type == 2) {
          triangles.push_back(nodes);
        } else {
          raw_lines.push_back({nodes[0], nodes[1], tags.empty() ? 0 : tags[0]});
          line_numbers.push_back(reader.number());
        }
      }
      if (trim(reader.expect()) != "$EndElements") reader.fail("expected $EndElements");
      seen_elements = true;
    } else if (!section.empty() && section.front() == '$' && section.rfind("$End", 0) != 0) {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + section.substr(1);
      std::string l;
      do {
        l = trim(reader.expect());
      } while (l != end);
    } else {
      reader.fail("unexpected content '" + section + "'");
    }
  }
  if (!seen_format) reader.fail("missing $MeshFormat section");
  if (!seen_elements) reader.fail("missing $Elements section");

  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto& t = triangles[k];
    const Point a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
    const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (area == 0.0) throw MeshError("triangle " + std::to_string(k) + ": degenerate (zero area)");
    if (area < 0.0) std::swap(t[1], t[2]);
  }

  std::vector<TaggedEdge> tagged;
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    const auto& l = raw_lines[i];
    BoundaryKind kind = BoundaryKind::untagged;
    if (auto it = named_tags.find(l[2]); it != named_tags.end() && it->second != BoundaryKind::untagged) {
      kind = it->second;
    } else if (l[2] == 1) {
      kind = BoundaryKind::dirichlet;
    } else if (l[2] == 2) {
      kind = BoundaryKind::neumann;
    } else if (l[2] == 3) {
      kind = BoundaryKind::robin;
    } else {
      throw MeshError("line " + std::to_string(line_numbers[i]) + ": unknown boundary physical tag " +
                      std::to_string(l[2]));
    }
    tagged.push_back({l[0], l[1], kind});
  }

  TriangleMesh mesh = build_mesh(std::move(vertices), std::move(triangles), tagged, default_kind);
  const ValidationReport report = validate(mesh);
  if (!report.ok) throw MeshError("invalid mesh: " + report.message);
  return mesh;
}

TriangleMesh read_mesh_file(const std::string& path, BoundaryKind default_kind) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in, default_kind);
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$PhysicalNames\n3\n1 1 \"Dirichlet\"\n1 2 \"Neumann\"\n1 3 \"Robin\"\n$EndPhysicalNames\n";
  out << "$Nodes\n" << mesh.vertices.size() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    out << i + 1 << ' ' << mesh.vertices[i].x() << ' ' << mesh.vertices[i].y() << " 0\n";
  out << "$EndNodes\n";

  std::vector<const Face*> boundary;
  for (const Face& f : mesh.faces)
    if (f.is_boundary() && f.kind != BoundaryKind::untagged) boundary.push_back(&f);
  out << "$Elements\n" << boundary.size() + mesh.triangles.size() << '\n';
  std::size_t id = 1;
  for (const Face* f : boundary) {
    // Keep the owner's counterclockwise edge direction.
    const FaceSide& s = f->sides[0];
    const auto& t = mesh.triangles[static_cast<std::size_t>(s.element)];
    const int a = t[s.local_face], b = t[(s.local_face + 1) % 3];
    const int tag = physical_tag(f->kind);
    out << id++ << " 1 2 " << tag << ' ' << tag << ' ' << a + 1 << ' ' << b + 1 << '\n';
  }
  for (const auto& t : mesh.triangles)
    out << id++ << " 2 2 0 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  out << "$EndElements\n";
}

void write_mesh_file(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace chdg
