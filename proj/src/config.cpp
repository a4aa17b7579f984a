#include "membrane/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "membrane/errors.hpp"
#include "membrane/report.hpp"

namespace membrane {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const std::string t = trim(text);
  const auto r = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) {
    throw std::invalid_argument("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

}  // namespace

DomainSpec DomainSpec::parse(const std::string& text) {
  DomainSpec spec;
  if (text == "disk") {
    spec.kind = DomainKind::kDisk;
  } else if (text == "rect") {
    spec.kind = DomainKind::kRect;
  } else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    spec.kind = DomainKind::kFile;
    spec.file = text.substr(5);
  } else {
    throw std::invalid_argument("domain must be disk, rect, or file:PATH (got '" + text + "')");
  }
  return spec;
}

std::string DomainSpec::to_string() const {
  switch (kind) {
    case DomainKind::kDisk: return "disk";
    case DomainKind::kRect: return "rect";
    case DomainKind::kFile: return "file:" + file.string();
  }
  return {};
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_value<double>("list", item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "domain") domain = DomainSpec::parse(trim(value));
  else if (key == "refinement") refinement = parse_value<int>(key, value);
  else if (key == "lambda") lambda = parse_value<double>(key, value);
  else if (key == "m") m = parse_value<double>(key, value);
  else if (key == "mass-L") mass_L = parse_value<double>(key, value);
  else if (key == "p-schedule") p_schedule = parse_number_list(value);
  else if (key == "tol") tol = parse_value<double>(key, value);
  else if (key == "max-iter") max_iter = parse_value<int>(key, value);
  else if (key == "eig-tol") eig_tol = parse_value<double>(key, value);
  else if (key == "damping") damping = parse_value<double>(key, value);
  else if (key == "out") out = trim(value);
  else if (key == "samples") samples = parse_value<int>(key, value);
  else if (key == "theta") theta = std::filesystem::path(trim(value));
  else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

void RunConfig::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!(m > 0.0) || !finite(m)) throw std::invalid_argument("m must be positive");
  if (!(mass_L >= 0.0) || !finite(mass_L)) throw std::invalid_argument("mass-L must be >= 0");
  if (refinement < 1) throw std::invalid_argument("refinement must be >= 1");
  if (!finite(lambda)) throw std::invalid_argument("lambda must be finite");
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter && *max_iter < 1) throw std::invalid_argument("max-iter must be >= 1");
  if (!(eig_tol > 0.0)) throw std::invalid_argument("eig-tol must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (samples < 2) throw std::invalid_argument("samples must be >= 2");
  if (p_schedule.empty()) throw std::invalid_argument("p-schedule is empty");
  for (std::size_t i = 0; i < p_schedule.size(); ++i) {
    if (!(p_schedule[i] > 1.0) || !finite(p_schedule[i])) {
      throw std::invalid_argument("p-schedule values must be > 1");
    }
    if (i > 0 && !(p_schedule[i] < p_schedule[i - 1])) {
      throw std::invalid_argument("p-schedule must be strictly decreasing");
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::string schedule;
  for (std::size_t i = 0; i < p_schedule.size(); ++i) {
    if (i > 0) schedule += ',';
    schedule += format_number(p_schedule[i]);
  }
  std::vector<std::pair<std::string, std::string>> e = {
      {"command", command},
      {"domain", domain.to_string()},
      {"refinement", std::to_string(refinement)},
      {"lambda", format_number(lambda)},
      {"m", format_number(m)},
      {"mass-L", format_number(mass_L)},
      {"p-schedule", schedule},
      {"tol", tol ? format_number(*tol) : "default"},
      {"max-iter", max_iter ? std::to_string(*max_iter) : "default"},
      {"eig-tol", format_number(eig_tol)},
      {"damping", format_number(damping)},
      {"out", out.string()},
      {"samples", std::to_string(samples)},
      {"theta", theta ? theta->string() : ""},
  };
  return e;
}

Mesh RunConfig::build_mesh() const {
  switch (domain.kind) {
    case DomainKind::kDisk: return disk_mesh(refinement);
    case DomainKind::kRect: return rect_mesh(refinement, refinement, 1.0, 1.0);
    case DomainKind::kFile: return load_mesh(domain.file);
  }
  throw std::logic_error("unreachable domain kind");
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (out.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    out[key] = trim(body.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> parse_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  return parse_key_values(in);
}

}  // namespace membrane
