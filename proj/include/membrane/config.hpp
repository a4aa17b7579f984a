#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "membrane/mesh.hpp"

namespace membrane {

enum class DomainKind { kDisk, kRect, kFile };

struct DomainSpec {
  DomainKind kind = DomainKind::kDisk;
  std::filesystem::path file;  // kFile only

  // "disk", "rect", or "file:PATH". Throws std::invalid_argument otherwise.
  static DomainSpec parse(const std::string& text);
  std::string to_string() const;
};

// Parameters of one CLI invocation. Keys in a config file use the flag
// names without the leading dashes (lambda, m, mass-L, domain, ...).
struct RunConfig {
  std::string command;
  DomainSpec domain;
  int refinement = 32;
  double lambda = 10.0;
  double m = 5.0;
  double mass_L = 0.424242;
  std::vector<double> p_schedule{3.0, 2.0, 1.5, 1.25, 1.1, 1.05};
  std::optional<double> tol;       // command-specific default when unset
  std::optional<int> max_iter;     // command-specific default when unset
  double eig_tol = 1e-10;
  double damping = 0.5;
  std::filesystem::path out = "out";
  int samples = 512;
  std::optional<std::filesystem::path> theta;

  // Sets one key from its text value; throws std::invalid_argument on an
  // unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);

  // Rejects invalid parameters before any computation.
  void validate() const;

  // Key/value view of the resolved configuration, in a fixed key order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  // Mesh for the configured domain (rect is the unit square with
  // refinement x refinement cells).
  Mesh build_mesh() const;
};

// Flat `key = value` text; '#' starts a comment. Throws ParseError with the
// line number on malformed lines.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> parse_key_values(const std::filesystem::path& path);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace membrane
