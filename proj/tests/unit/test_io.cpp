#include <doctest.h>

#include <cstdlib>
#include <string>

#include <gna/errors.hpp>
#include <gna/io.hpp>

using namespace gna;

TEST_CASE("grid specs parse into the three grid kinds") {
  const auto d = parse_grid_spec("dyadic:4:40");
  CHECK(d->kind() == GridKind::dyadic);
  CHECK(d->size() == 37);
  // Ratio 1/2 would normalize to the dyadic kind, so probe with 0.4.
  const auto geo = parse_grid_spec("geometric:0.4:4:11");
  CHECK(geo->kind() == GridKind::geometric);
  CHECK(geo->ratio() == 0.4);
  const auto ex = parse_grid_spec(
      "explicit:0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625");
  CHECK(ex->kind() == GridKind::explicit_values);
  CHECK(ex->size() == 8);
  CHECK(ex->eps(1) == 0.25);

  CHECK_THROWS_AS(parse_grid_spec("dyadic:4"), ParseError);
  CHECK_THROWS_AS(parse_grid_spec("dyadic:a:b"), ParseError);
  CHECK_THROWS_AS(parse_grid_spec("cubic:1:2"), ParseError);
  CHECK_THROWS_AS(parse_grid_spec(""), ParseError);
  // Structurally valid spec, semantically bad bounds.
  CHECK_THROWS_AS(parse_grid_spec("dyadic:10:4"), ConfigError);
}

TEST_CASE("matrix files parse, validate shape, and realize") {
  const std::string text = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 40},
    "scalar_kind": "real",
    "entries": [["1 - chi(even(k))", "0"], ["0", "chi(even(k))"]]
  })json";
  const auto mf = matrix_file_from_json(text);
  CHECK(mf.rows == 2);
  CHECK(mf.cols == 2);
  CHECK(mf.scalar_kind == ScalarKind::real);
  CHECK(mf.grid->size() == 37);
  const auto a = realize(mf);
  CHECK(a.rows() == 2);
  CHECK(a.kind() == ScalarKind::real);
  // Entry (0,0) is 1 at odd labels: k = 5 sits at position 1.
  CHECK(a.at(0, 0).real_sample(1) == 1.0);
  CHECK(a.at(0, 0).real_sample(0) == 0.0);

  // Grid override re-evaluates the same expressions elsewhere.
  const auto b = realize(mf, EpsGrid::dyadic(4, 11));
  CHECK(b.at(0, 0).grid()->size() == 8);
}

TEST_CASE("complex entries use re/im objects, numbers pass through") {
  const std::string text = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "complex",
    "entries": [[{"re": "0", "im": "1"}, 2.5], ["eps", {"re": "1", "im": "-1"}]]
  })json";
  const auto mf = matrix_file_from_json(text);
  const auto a = realize(mf);
  CHECK(a.kind() == ScalarKind::complex);
  CHECK(a.at(0, 0).sample(0) == Cplx(0, 1));
  CHECK(a.at(0, 1).sample(0) == Cplx(2.5, 0));
  CHECK(a.at(1, 1).sample(3) == Cplx(1, -1));

  // Real-kind files must not contain im parts.
  const std::string bad = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [[{"re": "0", "im": "1"}]]
  })json";
  CHECK_THROWS_AS(matrix_file_from_json(bad), ParseError);
}

TEST_CASE("matrix file structural failures are parse errors with positions") {
  CHECK_THROWS_AS(matrix_file_from_json("{"), ParseError);
  CHECK_THROWS_AS(matrix_file_from_json("[]"), ParseError);
  // Ragged rows name the offending row.
  const std::string ragged = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["1", "2"], ["3"]]
  })json";
  try {
    matrix_file_from_json(ragged);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row") != std::string::npos);
  }
  // Unknown keys are rejected rather than ignored.
  const std::string unknown = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["1"]],
    "comment": "?"
  })json";
  CHECK_THROWS_AS(matrix_file_from_json(unknown), ParseError);
  const std::string badkind = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "quaternion",
    "entries": [["1"]]
  })json";
  CHECK_THROWS_AS(matrix_file_from_json(badkind), ParseError);
  const std::string empty = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": []
  })json";
  CHECK_THROWS_AS(matrix_file_from_json(empty), ParseError);
}

TEST_CASE("realize prefixes entry positions on nested failures") {
  const std::string text = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["1", "1/0"]]
  })json";
  const auto mf = matrix_file_from_json(text);
  try {
    realize(mf);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("entry") != std::string::npos);
  }
  const std::string badsyntax = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["eps^"]]
  })json";
  CHECK_THROWS_AS(realize(matrix_file_from_json(badsyntax)), ParseError);
}

TEST_CASE("realize_vector requires a single column") {
  const std::string col = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["1"], ["eps"]]
  })json";
  const auto v = realize_vector(matrix_file_from_json(col));
  CHECK(v.n() == 2);
  const std::string wide = R"json({
    "grid": {"kind": "dyadic", "k_min": 4, "k_max": 20},
    "scalar_kind": "real",
    "entries": [["1", "2"]]
  })json";
  CHECK_THROWS_AS(realize_vector(matrix_file_from_json(wide)), StructuralError);
}

TEST_CASE("classifier config JSON honors validation and unknown-key rules") {
  const auto c = classifier_config_from_json(
      R"json({"m_neg": 10, "tail_fraction": 0.25, "noise_floor": 1e-12})json");
  CHECK(c.m_neg == 10);
  CHECK(c.m_inv == 8);
  CHECK(c.tail_fraction == 0.25);
  CHECK(c.noise_floor == 1e-12);
  CHECK_THROWS_AS(classifier_config_from_json(R"json({"m_neg": 0})json"), ConfigError);
  CHECK_THROWS_AS(classifier_config_from_json(R"json({"mneg": 8})json"), ConfigError);
  CHECK_THROWS_AS(classifier_config_from_json(R"json({"m_neg": "eight"})json"), ConfigError);
  CHECK_NOTHROW(classifier_config_from_json("{}"));
}

TEST_CASE("default config follows the GNA_CONFIG environment variable") {
  unsetenv("GNA_CONFIG");
  const auto base = default_classifier_config();
  CHECK(base.m_neg == 8);

  const std::string path = "/tmp/gna_test_config.json";
  {
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs(R"json({"m_neg": 11})json", f);
    fclose(f);
  }
  setenv("GNA_CONFIG", path.c_str(), 1);
  const auto overridden = default_classifier_config();
  CHECK(overridden.m_neg == 11);
  unsetenv("GNA_CONFIG");
  remove(path.c_str());
}
