#include "gna/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gna/errors.hpp"
#include "gna/expr.hpp"

namespace gna {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& text, const std::string& spec,
                    std::size_t offset, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size())
      throw ParseError("grid spec '" + spec + "': bad " + what + " '" + text + "'",
                       offset, what);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("grid spec '" + spec + "': bad " + what + " '" + text + "'",
                     offset, what);
  }
}

int parse_int(const std::string& text, const std::string& spec,
              std::size_t offset, const char* what) {
  double v = parse_number(text, spec, offset, what);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError("grid spec '" + spec + "': " + what + " must be an integer",
                     offset, what);
  return i;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what(),
                     e.byte, "JSON");
  }
}

GridPtr grid_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError("grid descriptor needs a \"kind\" field", 0, "grid object");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "dyadic")
      return EpsGrid::dyadic(j.at("k_min").get<int>(), j.at("k_max").get<int>());
    if (kind == "geometric")
      return EpsGrid::geometric(j.at("ratio").get<double>(),
                                j.at("k_min").get<int>(),
                                j.at("k_max").get<int>());
    if (kind == "explicit")
      return EpsGrid::from_values(j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ParseError("grid descriptor for kind '" + kind + "': " + e.what(), 0,
                     "grid fields");
  }
  throw ParseError("unknown grid kind '" + kind + "'", 0,
                   "dyadic | geometric | explicit");
}

} // namespace

GridPtr parse_grid_spec(const std::string& spec) {
  std::vector<std::string> parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "dyadic") {
    if (parts.size() != 3)
      throw ParseError("grid spec '" + spec + "': want dyadic:K_MIN:K_MAX", 0,
                       "dyadic:K_MIN:K_MAX");
    return EpsGrid::dyadic(parse_int(parts[1], spec, kind.size() + 1, "k_min"),
                           parse_int(parts[2], spec,
                                     kind.size() + parts[1].size() + 2, "k_max"));
  }
  if (kind == "geometric") {
    if (parts.size() != 4)
      throw ParseError("grid spec '" + spec + "': want geometric:RATIO:K_MIN:K_MAX",
                       0, "geometric:RATIO:K_MIN:K_MAX");
    return EpsGrid::geometric(parse_number(parts[1], spec, 0, "ratio"),
                              parse_int(parts[2], spec, 0, "k_min"),
                              parse_int(parts[3], spec, 0, "k_max"));
  }
  if (kind == "explicit") {
    if (parts.size() != 2)
      throw ParseError("grid spec '" + spec + "': want explicit:V1,V2,...", 0,
                       "explicit:V1,V2,...");
    std::vector<double> values;
    for (const std::string& v : split(parts[1], ','))
      values.push_back(parse_number(v, spec, 0, "grid value"));
    return EpsGrid::from_values(values);
  }
  throw ParseError("grid spec '" + spec + "': unknown kind '" + kind + "'", 0,
                   "dyadic | geometric | explicit");
}

MatrixFile matrix_file_from_json(const std::string& text) {
  json j = parse_json(text, "matrix file");
  if (!j.is_object())
    throw ParseError("matrix file must be a JSON object", 0, "object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "grid" && key != "scalar_kind" && key != "entries")
      throw ParseError("matrix file has unknown key \"" + key + "\"", 0,
                       "grid | scalar_kind | entries");
  }
  if (!j.contains("grid") || !j.contains("entries"))
    throw ParseError("matrix file needs \"grid\" and \"entries\"", 0,
                     "grid, entries");

  MatrixFile mf;
  mf.grid = grid_from_json(j.at("grid"));
  const std::string kind = j.value("scalar_kind", std::string("real"));
  if (kind == "real") mf.scalar_kind = ScalarKind::real;
  else if (kind == "complex") mf.scalar_kind = ScalarKind::complex;
  else
    throw ParseError("scalar_kind must be \"real\" or \"complex\", got \"" +
                     kind + "\"", 0, "real | complex");

  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.empty())
    throw ParseError("\"entries\" must be a non-empty array of rows", 0, "rows");
  for (const json& row : entries) {
    if (!row.is_array() || row.empty())
      throw ParseError("each entries row must be a non-empty array", 0, "row");
    if (mf.cols == 0) mf.cols = row.size();
    if (row.size() != mf.cols)
      throw ParseError("entries table is not rectangular: row " +
                       std::to_string(mf.rows) + " has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(mf.cols), 0, "rectangular table");
    for (const json& cell : row) {
      if (cell.is_string()) {
        mf.entries_re.push_back(cell.get<std::string>());
        mf.entries_im.push_back("");
      } else if (cell.is_number()) {
        mf.entries_re.push_back(cell.dump());
        mf.entries_im.push_back("");
      } else if (cell.is_object()) {
        if (mf.scalar_kind != ScalarKind::complex)
          throw ParseError("complex {re, im} entry in a real-kind file", 0,
                           "string entry");
        for (const auto& [key, value] : cell.items()) {
          (void)value;
          if (key != "re" && key != "im")
            throw ParseError("complex entry has unknown key \"" + key + "\"", 0,
                             "re | im");
        }
        mf.entries_re.push_back(cell.value("re", std::string("0")));
        mf.entries_im.push_back(cell.value("im", std::string("0")));
      } else {
        throw ParseError("matrix entry must be an expression string or "
                         "{re, im} object", 0, "entry");
      }
    }
    ++mf.rows;
  }
  return mf;
}

MatrixFile load_matrix_file(const std::string& path) {
  return matrix_file_from_json(read_file(path));
}

namespace {

GenScalar realize_entry(const MatrixFile& mf, GridPtr grid, std::size_t r,
                        std::size_t c) {
  const std::size_t idx = r * mf.cols + c;
  const std::string where =
      "entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
  try {
    GenScalar re = eval_scalar(mf.entries_re[idx], grid);
    if (mf.entries_im[idx].empty()) {
      if (mf.scalar_kind == ScalarKind::complex) {
        std::vector<Cplx> samples(re.samples().begin(), re.samples().end());
        return GenScalar::from_samples(grid, std::move(samples),
                                       ScalarKind::complex);
      }
      return re;
    }
    GenScalar im = eval_scalar(mf.entries_im[idx], grid);
    std::vector<Cplx> samples(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i)
      samples[i] = Cplx(re.sample(i).real(), im.sample(i).real());
    return GenScalar::from_samples(grid, std::move(samples),
                                   ScalarKind::complex);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what(), e.offset, e.expected);
  } catch (const EvalError& e) {
    throw EvalError(where + ": " + e.what(), e.sample_index);
  }
}

} // namespace

GenMatrix realize(const MatrixFile& mf, GridPtr grid_override) {
  GridPtr grid = grid_override ? grid_override : mf.grid;
  std::vector<GenScalar> entries;
  entries.reserve(mf.rows * mf.cols);
  for (std::size_t r = 0; r < mf.rows; ++r)
    for (std::size_t c = 0; c < mf.cols; ++c)
      entries.push_back(realize_entry(mf, grid, r, c));
  return GenMatrix(mf.rows, mf.cols, std::move(entries));
}

GenVector realize_vector(const MatrixFile& mf, GridPtr grid_override) {
  if (mf.cols != 1)
    throw StructuralError("vector file must have exactly one column, got " +
                          std::to_string(mf.cols));
  GenMatrix m = realize(mf, std::move(grid_override));
  return m.col(0);
}

ClassifierConfig classifier_config_from_json(const std::string& text) {
  json j = parse_json(text, "classifier config");
  if (!j.is_object()) throw ConfigError("classifier config must be a JSON object");
  ClassifierConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "m_neg") cfg.m_neg = value.get<int>();
      else if (key == "m_inv") cfg.m_inv = value.get<int>();
      else if (key == "tail_fraction") cfg.tail_fraction = value.get<double>();
      else if (key == "noise_floor") cfg.noise_floor = value.get<double>();
      else if (key == "noise_slope_max") cfg.noise_slope_max = value.get<double>();
      else
        throw ConfigError("classifier config has unknown key \"" + key + "\"");
    } catch (const json::exception& e) {
      throw ConfigError("classifier config key \"" + key + "\": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ClassifierConfig load_classifier_config(const std::string& path) {
  return classifier_config_from_json(read_file(path));
}

ClassifierConfig default_classifier_config() {
  if (const char* path = std::getenv("GNA_CONFIG"))
    if (*path) return load_classifier_config(path);
  return ClassifierConfig{};
}

} // namespace gna
