#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <string>

#include "membrane/config.hpp"
#include "membrane/errors.hpp"
#include "membrane/mesh.hpp"
#include "membrane/report.hpp"

using namespace membrane;

TEST_CASE("config keys override defaults") {
  RunConfig c;
  c.set("lambda", "12.5");
  c.set("mass-L", "0.3");
  c.set("p-schedule", "2, 1.5,1.1");
  c.set("domain", "rect");
  c.set("tol", "1e-6");
  CHECK(c.lambda == 12.5);
  CHECK(c.mass_L == 0.3);
  CHECK(c.p_schedule == std::vector<double>{2.0, 1.5, 1.1});
  CHECK(c.domain.kind == DomainKind::kRect);
  CHECK(c.tol.value() == 1e-6);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(c.set("lambda", "ten"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("refinement", "3.5"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("domain", "sphere"), std::invalid_argument);
}

TEST_CASE("config validation rejects bad parameters") {
  const auto invalid = [](const char* key, const char* value) {
    RunConfig c;
    c.set(key, value);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  invalid("m", "0");
  invalid("mass-L", "-1");
  invalid("refinement", "0");
  invalid("damping", "1.5");
  invalid("damping", "0");
  invalid("p-schedule", "2,3");
  invalid("p-schedule", "1.5,1");
  invalid("samples", "1");
  invalid("tol", "0");
}

TEST_CASE("domain spec round trip") {
  CHECK(DomainSpec::parse("disk").to_string() == "disk");
  const DomainSpec f = DomainSpec::parse("file:meshes/a.txt");
  CHECK(f.kind == DomainKind::kFile);
  CHECK(f.file == "meshes/a.txt");
  CHECK(f.to_string() == "file:meshes/a.txt");
  CHECK_THROWS_AS(DomainSpec::parse("file:"), std::invalid_argument);
}

TEST_CASE("key value parser") {
  std::istringstream in("# comment\nlambda = 11\n\nm=2 # trailing\n");
  const auto kv = parse_key_values(in);
  CHECK(kv.at("lambda") == "11");
  CHECK(kv.at("m") == "2");
  std::istringstream dup("m = 1\nm = 2\n");
  try {
    parse_key_values(dup);
    FAIL("expected duplicate key error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad("m = 1\nnonsense\n");
  CHECK_THROWS_AS(parse_key_values(bad), ParseError);
}

TEST_CASE("density csv round trip and diagnostics") {
  const Mesh mesh = rect_mesh(2, 1, 1.0, 1.0);
  const std::vector<double> values{0.0, 0.25, 1.0 / 3.0, 7.5};
  std::ostringstream out;
  write_triangle_field_csv(out, mesh, values);
  std::istringstream in(out.str());
  const DensityField back = read_density_csv(in, mesh);
  CHECK(back.values == values);

  const auto error_line = [&](const std::string& text) {
    std::istringstream s(text);
    try {
      read_density_csv(s, mesh);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  const std::string header = "tri_or_node,x,y,value\n";
  CHECK(error_line("t,x,y,v\n") == 1);
  CHECK(error_line(header + "0,0,0,1\n1,0,0,-1\n") == 3);
  CHECK(error_line(header + "0,0,0,1\n2,0,0,1\n") == 3);
  CHECK(error_line(header + "0,0,0,abc\n") == 2);
  CHECK(error_line(header + "0,0,0,1\n1,0,0,1\n") > 0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(10.0) == "10");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_exact(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_exact(0.1 + 0.2)) == 0.1 + 0.2);
}
