#include "membrane/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "membrane/errors.hpp"

namespace membrane {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                " values, got " + std::to_string(got));
  }
}

void write_row(std::ostream& out, std::size_t index, const Point& p, double value) {
  out << index << ',' << format_exact(p.x) << ',' << format_exact(p.y) << ','
      << format_exact(value) << '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r' && c != ' ' && c != '\t') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

}  // namespace

void write_triangle_field_csv(std::ostream& out, const Mesh& mesh, std::span<const double> values) {
  check_size(values.size(), mesh.num_triangles(), "triangle field");
  out << "tri_or_node,x,y,value\n";
  for (std::size_t t = 0; t < values.size(); ++t) write_row(out, t, mesh.centroid(t), values[t]);
}

void write_node_field_csv(std::ostream& out, const Mesh& mesh, std::span<const double> values) {
  check_size(values.size(), mesh.num_nodes(), "node field");
  out << "tri_or_node,x,y,value\n";
  const auto nodes = mesh.nodes();
  for (std::size_t v = 0; v < values.size(); ++v) write_row(out, v, nodes[v], values[v]);
}

void write_eigenfunction_csv(std::ostream& out, const Mesh& mesh, std::span<const double> u) {
  check_size(u.size(), mesh.num_nodes(), "eigenfunction");
  out << "node,x,y,u\n";
  const auto nodes = mesh.nodes();
  for (std::size_t v = 0; v < u.size(); ++v) write_row(out, v, nodes[v], u[v]);
}

DensityField read_density_csv(std::istream& in, const Mesh& mesh) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(0, "empty density file");
  ++line_no;
  const auto header = split_csv(line);
  if (header.size() != 4 || header[0] != "tri_or_node" || header[3] != "value") {
    throw ParseError(line_no, "expected header 'tri_or_node,x,y,value'");
  }
  DensityField theta{std::vector<double>(), 1.0};
  theta.values.reserve(mesh.num_triangles());
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_csv(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 comma-separated fields");
    long index = -1;
    {
      const auto& f = fields[0];
      const auto r = std::from_chars(f.data(), f.data() + f.size(), index);
      if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
        throw ParseError(line_no, "invalid triangle index '" + f + "'");
      }
    }
    if (index != static_cast<long>(theta.values.size())) {
      throw ParseError(line_no, "triangle index " + std::to_string(index) + " out of order (expected " +
                                    std::to_string(theta.values.size()) + ")");
    }
    if (theta.values.size() >= mesh.num_triangles()) {
      throw ParseError(line_no, "more rows than mesh triangles");
    }
    double value = 0.0;
    const auto& f = fields[3];
    const auto r = std::from_chars(f.data(), f.data() + f.size(), value);
    if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
      throw ParseError(line_no, "invalid value '" + f + "'");
    }
    if (!std::isfinite(value) || value < 0.0) {
      throw ParseError(line_no, "density must be finite and nonnegative");
    }
    theta.values.push_back(value);
  }
  if (theta.values.size() != mesh.num_triangles()) {
    throw ParseError(line_no, "density has " + std::to_string(theta.values.size()) +
                                  " rows but the mesh has " + std::to_string(mesh.num_triangles()) +
                                  " triangles");
  }
  return theta;
}

DensityField read_density_csv(const std::filesystem::path& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open density file " + path.string());
  return read_density_csv(in, mesh);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace membrane
