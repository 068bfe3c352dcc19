#pragma once

#include <string>
#include <vector>

#include <gna/classify.hpp>
#include <gna/linalg.hpp>

namespace gna {

// Grid descriptor in flag syntax:
//   dyadic:K_MIN:K_MAX
//   geometric:RATIO:K_MIN:K_MAX
//   explicit:V1,V2,...
// Malformed specs raise ParseError (offset into the spec string).
GridPtr parse_grid_spec(const std::string& spec);

// Structured matrix file: a grid declaration, a scalar kind, and a
// rectangular table of net-expression entries.  Complex files may give any
// entry as {"re": expr, "im": expr}; a bare string means a real entry.
//
//   {
//     "grid": {"kind": "dyadic", "k_min": 4, "k_max": 40},
//     "scalar_kind": "real",
//     "entries": [["1 - chi(even(k))", "0"], ["0", "chi(even(k))"]]
//   }
//
// "geometric" grids add "ratio"; "explicit" grids give "values": [...].
struct MatrixFile {
  GridPtr grid;
  ScalarKind scalar_kind = ScalarKind::real;
  std::size_t rows = 0, cols = 0;
  std::vector<std::string> entries_re; // row-major expression sources
  std::vector<std::string> entries_im; // empty string when absent
};

MatrixFile matrix_file_from_json(const std::string& text);
MatrixFile load_matrix_file(const std::string& path);

// Parses and evaluates every entry on the file's grid (or the override).
// Parse and evaluation failures are rethrown with the entry position
// prefixed to the message.
GenMatrix realize(const MatrixFile& mf, GridPtr grid_override = nullptr);

// Same, for files holding a single column.
GenVector realize_vector(const MatrixFile& mf, GridPtr grid_override = nullptr);

// Classifier configuration as JSON, all keys optional:
//   {"m_neg": 8, "m_inv": 8, "tail_fraction": 0.5,
//    "noise_floor": 1e-11, "noise_slope_max": 1.0}
// Unknown keys raise ConfigError, as do values rejected by validate().
ClassifierConfig classifier_config_from_json(const std::string& text);
ClassifierConfig load_classifier_config(const std::string& path);

// Default config, honoring the GNA_CONFIG environment variable when set.
ClassifierConfig default_classifier_config();

} // namespace gna
