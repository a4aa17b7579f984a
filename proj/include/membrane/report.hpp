#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "membrane/fem.hpp"
#include "membrane/mesh.hpp"

namespace membrane {

// "%.15g", for console output.
std::string format_number(double value);
// Shortest text that reads back to the same double.
std::string format_exact(double value);

// Field exports share the header tri_or_node,x,y,value. Triangle fields use
// centroids for x,y. Values are written exactly, so an exported density
// reads back bit for bit.
void write_triangle_field_csv(std::ostream& out, const Mesh& mesh, std::span<const double> values);
void write_node_field_csv(std::ostream& out, const Mesh& mesh, std::span<const double> values);

// node,x,y,u
void write_eigenfunction_csv(std::ostream& out, const Mesh& mesh, std::span<const double> u);

// Reads a triangle field written by write_triangle_field_csv. Rows must be
// in triangle order and cover every triangle; values must be finite and
// >= 0. Throws ParseError with the offending line.
DensityField read_density_csv(std::istream& in, const Mesh& mesh);
DensityField read_density_csv(const std::filesystem::path& path, const Mesh& mesh);

// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace membrane
