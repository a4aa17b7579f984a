#include "membrane/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "membrane/errors.hpp"

namespace membrane {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mesh::Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)) {
  if (nodes_.empty()) throw std::invalid_argument("mesh has no nodes");
  if (triangles_.empty()) throw std::invalid_argument("mesh has no triangles");
  const auto n = static_cast<std::int64_t>(nodes_.size());

  areas_.resize(triangles_.size());
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(3 * triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (auto v : tri) {
      if (v < 0 || v >= n) {
        throw std::invalid_argument("triangle " + std::to_string(t) + " has node index out of range");
      }
    }
    const double area = signed_area(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]);
    if (!(area > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(t) + " has nonpositive area");
    }
    areas_[t] = area;
    total_area_ += area;
    for (int k = 0; k < 3; ++k) {
      const std::int64_t a = tri[k];
      const std::int64_t b = tri[(k + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
      const double dx = nodes_[a].x - nodes_[b].x;
      const double dy = nodes_[a].y - nodes_[b].y;
      h_ = std::max(h_, std::hypot(dx, dy));
    }
  }

  std::sort(edges.begin(), edges.end());
  boundary_flag_.assign(nodes_.size(), 0);
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    const std::size_t count = j - i;
    if (count > 2) throw std::invalid_argument("edge shared by more than two triangles");
    if (count == 1) {
      boundary_flag_[edges[i].first] = 1;
      boundary_flag_[edges[i].second] = 1;
      ++num_boundary_edges_;
    }
    ++num_edges_;
    i = j;
  }
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(nodes_.size()); ++v) {
    if (boundary_flag_[v]) boundary_nodes_.push_back(v);
  }
}

Point Mesh::centroid(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return {(nodes_[tri[0]].x + nodes_[tri[1]].x + nodes_[tri[2]].x) / 3.0,
          (nodes_[tri[0]].y + nodes_[tri[1]].y + nodes_[tri[2]].y) / 3.0};
}

double Mesh::min_angle_degrees() const {
  double smallest = 180.0;
  for (const Triangle& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const Point& p = nodes_[tri[k]];
      const Point& q = nodes_[tri[(k + 1) % 3]];
      const Point& r = nodes_[tri[(k + 2) % 3]];
      const double ux = q.x - p.x, uy = q.y - p.y;
      const double vx = r.x - p.x, vy = r.y - p.y;
      const double angle = std::atan2(std::fabs(ux * vy - uy * vx), ux * vx + uy * vy);
      smallest = std::min(smallest, angle * 180.0 / std::numbers::pi);
    }
  }
  return smallest;
}

Mesh disk_mesh(int refinement) {
  if (refinement < 1) throw std::invalid_argument("disk_mesh: refinement must be >= 1");
  const int n = refinement;
  std::vector<Point> nodes;
  nodes.reserve(1 + 4 * static_cast<std::size_t>(n) * (n + 1));
  nodes.push_back({0.0, 0.0});
  std::vector<std::int32_t> ring_start(n + 1, 0);
  for (int k = 1; k <= n; ++k) {
    ring_start[k] = static_cast<std::int32_t>(nodes.size());
    const int count = 8 * k;
    const double radius = k == n ? 1.0 : static_cast<double>(k) / n;
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / count;
      nodes.push_back({radius * std::cos(phi), radius * std::sin(phi)});
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(8 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < 8; ++j) {
    triangles.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % 8});
  }
  for (int k = 2; k <= n; ++k) {
    const int inner = 8 * (k - 1);
    const int outer = 8 * k;
    const auto in = [&](int i) { return ring_start[k - 1] + i % inner; };
    const auto out = [&](int j) { return ring_start[k] + j % outer; };
    int i = 0;
    int j = 0;
    // Advance along whichever ring has the next node at the smaller angle;
    // compare (i+1)/inner with (j+1)/outer in integers.
    while (i < inner || j < outer) {
      const bool take_outer =
          j < outer && (i >= inner || static_cast<long>(j + 1) * inner <= static_cast<long>(i + 1) * outer);
      if (take_outer) {
        triangles.push_back({in(i), out(j), out(j + 1)});
        ++j;
      } else {
        triangles.push_back({in(i), out(j), in(i + 1)});
        ++i;
      }
    }
  }
  return Mesh(std::move(nodes), std::move(triangles));
}

Mesh rect_mesh(int nx, int ny, double width, double height) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("rect_mesh: nx and ny must be >= 1");
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("rect_mesh: width and height must be positive");
  }
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? height : height * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? width : width * i / nx;
      nodes.push_back({x, y});
    }
  }
  const auto id = [nx](int i, int j) { return static_cast<std::int32_t>(j * (nx + 1) + i); };
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(nodes), std::move(triangles));
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

// Splits a line into whitespace-separated tokens.
std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

template <typename T>
T parse_number(const std::string& token, int line, const char* what) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw ParseError(line, std::string("invalid ") + what + " '" + token + "'");
  }
  return value;
}

}  // namespace

void save_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_nodes() << ' ' << mesh.num_triangles() << '\n';
  const auto nodes = mesh.nodes();
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    out << shortest(nodes[v].x) << ' ' << shortest(nodes[v].y) << ' '
        << (mesh.is_boundary(static_cast<std::int32_t>(v)) ? 1 : 0) << '\n';
  }
  for (const Triangle& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_mesh(mesh, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Mesh load_mesh(std::istream& in) {
  int line_no = 0;
  std::string line;
  const auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      auto t = tokens(line);
      if (!t.empty()) return t;
    }
    throw ParseError(0, "unexpected end of file after line " + std::to_string(line_no));
  };

  auto header = next_line();
  if (header.size() != 2) throw ParseError(line_no, "header must be 'V F'");
  const auto num_nodes = parse_number<long>(header[0], line_no, "node count");
  const auto num_tris = parse_number<long>(header[1], line_no, "triangle count");
  if (num_nodes <= 0) throw ParseError(line_no, "empty node list");
  if (num_tris <= 0) throw ParseError(line_no, "empty triangle list");

  std::vector<Point> nodes(static_cast<std::size_t>(num_nodes));
  std::vector<std::uint8_t> flags(nodes.size());
  std::vector<int> node_line(nodes.size());
  for (auto& p : nodes) {
    auto t = next_line();
    if (t.size() != 3) throw ParseError(line_no, "node line must be 'x y b'");
    p.x = parse_number<double>(t[0], line_no, "x coordinate");
    p.y = parse_number<double>(t[1], line_no, "y coordinate");
    const int b = parse_number<int>(t[2], line_no, "boundary flag");
    if (b != 0 && b != 1) throw ParseError(line_no, "boundary flag must be 0 or 1");
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ParseError(line_no, "non-finite coordinate");
    const auto idx = static_cast<std::size_t>(&p - nodes.data());
    flags[idx] = static_cast<std::uint8_t>(b);
    node_line[idx] = line_no;
  }

  std::vector<Triangle> triangles(static_cast<std::size_t>(num_tris));
  for (auto& tri : triangles) {
    auto t = next_line();
    if (t.size() != 3) throw ParseError(line_no, "triangle line must be 'i j k'");
    for (int k = 0; k < 3; ++k) {
      const auto v = parse_number<long>(t[k], line_no, "node index");
      if (v < 0 || v >= num_nodes) throw ParseError(line_no, "node index out of range");
      tri[k] = static_cast<std::int32_t>(v);
    }
    if (!(signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]) > 0.0)) {
      throw ParseError(line_no, "nonpositive area (triangles must be counterclockwise)");
    }
  }
  for (std::string rest; std::getline(in, rest);) {
    ++line_no;
    if (!tokens(rest).empty()) throw ParseError(line_no, "trailing content after last triangle");
  }

  Mesh mesh(std::move(nodes), std::move(triangles));
  for (std::size_t v = 0; v < flags.size(); ++v) {
    if ((flags[v] != 0) != mesh.is_boundary(static_cast<std::int32_t>(v))) {
      throw ParseError(node_line[v], "boundary flag disagrees with mesh connectivity");
    }
  }
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file " + path.string());
  return load_mesh(in);
}

}  // namespace membrane
