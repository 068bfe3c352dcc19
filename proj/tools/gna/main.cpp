// Command line front end: evaluate and classify nets, run the linear-algebra
// and spectral operations on matrices of net expressions, and emit
// deterministic reports (pretty text or JSON).
//
// Exit codes: 0 success, 2 malformed input (parse/eval/config/shape),
// 3 violated mathematical precondition, 4 failed internal postcondition.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <gna/errors.hpp>
#include <gna/expr.hpp>
#include <gna/io.hpp>
#include <gna/spectra.hpp>
#include <gna/symplectic.hpp>

using nlohmann::ordered_json;
using namespace gna;

namespace {

enum class OutputMode { pretty, json_mode };

struct GlobalOpts {
  std::optional<std::string> grid_spec;
  std::optional<int> m_neg, m_inv;
  std::optional<double> tail, noise_floor, noise_slope_max;
  OutputMode output = OutputMode::pretty;

  ClassifierConfig config() const {
    ClassifierConfig cfg = default_classifier_config();
    if (m_neg) cfg.m_neg = *m_neg;
    if (m_inv) cfg.m_inv = *m_inv;
    if (tail) cfg.tail_fraction = *tail;
    if (noise_floor) cfg.noise_floor = *noise_floor;
    if (noise_slope_max) cfg.noise_slope_max = *noise_slope_max;
    cfg.validate();
    return cfg;
  }
  GridPtr grid_override() const {
    if (grid_spec) return parse_grid_spec(*grid_spec);
    return nullptr;
  }
};

// ------------------------------------------------------------------ JSON ---

ordered_json grid_json(const GridPtr& g) {
  ordered_json j;
  switch (g->kind()) {
    case GridKind::dyadic: j["kind"] = "dyadic"; break;
    case GridKind::geometric: j["kind"] = "geometric"; break;
    case GridKind::explicit_values: j["kind"] = "explicit"; break;
  }
  if (g->kind() != GridKind::explicit_values) {
    j["k_min"] = g->k_min();
    j["k_max"] = g->k_max();
    if (g->kind() == GridKind::geometric) j["ratio"] = g->ratio();
  }
  j["size"] = g->size();
  return j;
}

ordered_json config_json(const ClassifierConfig& c) {
  return ordered_json{{"m_neg", c.m_neg},
                      {"m_inv", c.m_inv},
                      {"tail_fraction", c.tail_fraction},
                      {"noise_floor", c.noise_floor},
                      {"noise_slope_max", c.noise_slope_max}};
}

ordered_json report_json(const AsymptoticReport& r) {
  ordered_json j;
  j["classification"] = to_string(r.classification);
  j["moderate"] = r.moderate;
  j["order"] = r.order;
  if (std::isfinite(r.slope)) j["slope"] = r.slope;
  else j["slope"] = nullptr;
  if (std::isfinite(r.residual)) j["residual"] = r.residual;
  else j["residual"] = nullptr;
  if (std::isfinite(r.fitted_log2_c)) j["fitted_log2_c"] = r.fitted_log2_c;
  else j["fitted_log2_c"] = nullptr;
  j["envelope_order"] = r.envelope_order;
  if (std::isfinite(r.envelope_log2_c)) j["envelope_log2_c"] = r.envelope_log2_c;
  else j["envelope_log2_c"] = nullptr;
  j["tail_fraction_used"] = r.tail_fraction_used;
  j["tail_start"] = r.tail_start;
  j["m_neg"] = r.m_neg;
  j["m_inv"] = r.m_inv;
  j["noise_floor"] = r.noise_floor;
  return j;
}

ordered_json scalar_json(const GenScalar& s) {
  ordered_json samples = ordered_json::array();
  if (s.is_real_kind()) {
    for (std::size_t i = 0; i < s.size(); ++i) samples.push_back(s.real_sample(i));
    return ordered_json{{"kind", "real"}, {"samples", samples}};
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    samples.push_back(ordered_json::array({s.sample(i).real(), s.sample(i).imag()}));
  return ordered_json{{"kind", "complex"}, {"samples", samples}};
}

ordered_json vector_json(const GenVector& v) {
  ordered_json entries = ordered_json::array();
  for (std::size_t j = 0; j < v.n(); ++j) entries.push_back(scalar_json(v[j]));
  return ordered_json{{"n", v.n()}, {"entries", entries}};
}

ordered_json matrix_json(const GenMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m.at(r, c)));
    rows.push_back(row);
  }
  return ordered_json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

// ---------------------------------------------------------------- pretty ---

void pretty_grid(const GridPtr& g) {
  switch (g->kind()) {
    case GridKind::dyadic:
      std::printf("grid: dyadic k=%ld..%ld (%zu samples)\n", g->k_min(), g->k_max(),
                  g->size());
      break;
    case GridKind::geometric:
      std::printf("grid: geometric ratio=%.9g k=%ld..%ld (%zu samples)\n",
                  g->ratio(), g->k_min(), g->k_max(), g->size());
      break;
    case GridKind::explicit_values:
      std::printf("grid: explicit (%zu samples)\n", g->size());
      break;
  }
}

void pretty_report(const char* name, const AsymptoticReport& r) {
  std::printf("%s: %s", name, to_string(r.classification).c_str());
  if (std::isfinite(r.slope)) std::printf("  slope=%.6g", r.slope);
  if (std::isfinite(r.residual)) std::printf("  fit_residual=%.6g", r.residual);
  std::printf("  envelope_order=%d", r.envelope_order);
  std::printf("  tail_start=%zu  thresholds(m_neg=%d, m_inv=%d, floor=%.3g)\n",
              r.tail_start, r.m_neg, r.m_inv, r.noise_floor);
}

std::string sample_str(const GenScalar& s, std::size_t i) {
  char buf[64];
  if (s.is_real_kind()) {
    std::snprintf(buf, sizeof buf, "%.9g", s.real_sample(i));
  } else {
    std::snprintf(buf, sizeof buf, "%.9g%+.9gi", s.sample(i).real(),
                  s.sample(i).imag());
  }
  return buf;
}

void pretty_scalar(const char* name, const GenScalar& s) {
  const std::size_t last = s.size() - 1;
  std::printf("%s: first=%s last=%s\n", name, sample_str(s, 0).c_str(),
              sample_str(s, last).c_str());
}

void pretty_matrix(const char* name, const GenMatrix& m) {
  std::printf("%s (%zux%zu), first and last grid samples:\n", name, m.rows(),
              m.cols());
  const std::size_t last = m.grid()->size() - 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::printf("  [");
    for (std::size_t c = 0; c < m.cols(); ++c)
      std::printf("%s%s", c ? ", " : "", sample_str(m.at(r, c), 0).c_str());
    std::printf("]   [");
    for (std::size_t c = 0; c < m.cols(); ++c)
      std::printf("%s%s", c ? ", " : "", sample_str(m.at(r, c), last).c_str());
    std::printf("]\n");
  }
}

void pretty_vector(const char* name, const GenVector& v) {
  const std::size_t last = v.grid()->size() - 1;
  std::printf("%s: first=[", name);
  for (std::size_t j = 0; j < v.n(); ++j)
    std::printf("%s%s", j ? ", " : "", sample_str(v[j], 0).c_str());
  std::printf("] last=[");
  for (std::size_t j = 0; j < v.n(); ++j)
    std::printf("%s%s", j ? ", " : "", sample_str(v[j], last).c_str());
  std::printf("]\n");
}

// ------------------------------------------------------------- commands ---

struct CommandContext {
  const GlobalOpts& opts;
  ClassifierConfig cfg;
  ordered_json out; // json-mode report
};

void emit(CommandContext& ctx) {
  if (ctx.opts.output == OutputMode::json_mode)
    std::printf("%s\n", ctx.out.dump(2).c_str());
}

void header(CommandContext& ctx, const char* command, const GridPtr& grid) {
  ctx.out["command"] = command;
  ctx.out["grid"] = grid_json(grid);
  ctx.out["config"] = config_json(ctx.cfg);
  if (ctx.opts.output == OutputMode::pretty) {
    std::printf("command: %s\n", command);
    pretty_grid(grid);
  }
}

int cmd_classify(CommandContext& ctx, const std::string& expr) {
  GridPtr grid = ctx.opts.grid_override();
  if (!grid) grid = EpsGrid::default_grid();
  GenScalar s = eval_scalar(expr, grid);
  AsymptoticReport rep = classify(s, ctx.cfg);
  header(ctx, "classify", grid);
  ctx.out["expression"] = expr;
  ctx.out["value"] = scalar_json(s);
  ctx.out["report"] = report_json(rep);
  if (ctx.opts.output == OutputMode::pretty) {
    pretty_scalar("value", s);
    pretty_report("report", rep);
  }
  emit(ctx);
  return 0;
}

int cmd_det(CommandContext& ctx, const std::string& file,
            const std::optional<std::string>& shift) {
  MatrixFile mf = load_matrix_file(file);
  GenMatrix a = realize(mf, ctx.opts.grid_override());
  GridPtr grid = a.grid();
  if (shift) {
    GenScalar s = eval_scalar(*shift, grid);
    a = sub(a, scale(s, GenMatrix::identity(grid, a.rows(), a.kind())));
  }
  GenScalar d = det(a);
  AsymptoticReport rep = classify(d, ctx.cfg);
  header(ctx, "det", grid);
  if (shift) ctx.out["shift"] = *shift;
  ctx.out["det"] = scalar_json(d);
  ctx.out["report"] = report_json(rep);
  ctx.out["invertible"] = is_strictly_nonzero(rep);
  if (ctx.opts.output == OutputMode::pretty) {
    pretty_scalar("det", d);
    pretty_report("report", rep);
    std::printf("invertible: %s\n", is_strictly_nonzero(rep) ? "true" : "false");
  }
  emit(ctx);
  return 0;
}

int cmd_invertible(CommandContext& ctx, const std::string& file) {
  MatrixFile mf = load_matrix_file(file);
  GenMatrix a = realize(mf, ctx.opts.grid_override());
  InvertibilityResult res = is_invertible(a, ctx.cfg);
  header(ctx, "invertible", a.grid());
  ctx.out["invertible"] = res.invertible;
  ctx.out["det_report"] = report_json(res.det_report);
  if (ctx.opts.output == OutputMode::pretty) {
    std::printf("invertible: %s\n", res.invertible ? "true" : "false");
    pretty_report("det_report", res.det_report);
  }
  emit(ctx);
  return 0;
}

int cmd_solve(CommandContext& ctx, const std::string& file,
              const std::string& rhs_file) {
  GridPtr over = ctx.opts.grid_override();
  GenMatrix a = realize(load_matrix_file(file), over);
  GenVector b = realize_vector(load_matrix_file(rhs_file), over);
  GenVector x = solve(a, b, ctx.cfg);
  NegligibilityCheck res = entrywise_negligible(sub(matvec(a, x), b), ctx.cfg);
  header(ctx, "solve", a.grid());
  ctx.out["solution"] = vector_json(x);
  ctx.out["residual_report"] = report_json(res.report);
  if (ctx.opts.output == OutputMode::pretty) {
    pretty_vector("solution", x);
    pretty_report("residual_report", res.report);
  }
  emit(ctx);
  return 0;
}

ordered_json basis_json(const SymplecticBasis& basis) {
  ordered_json j;
  j["n_pairs"] = basis.n_pairs();
  j["matrix"] = matrix_json(basis.to_matrix());
  return j;
}

int cmd_symplectic_basis(CommandContext& ctx, const std::string& file) {
  GenMatrix g = realize(load_matrix_file(file), ctx.opts.grid_override());
  SymplecticForm form = SymplecticForm::from_gram(g, ctx.cfg);
  SymplecticBasis basis = symplectic_basis(form, ctx.cfg);
  RelationCheck check = check_symplectic_relations(form, basis, ctx.cfg);
  header(ctx, "symplectic-basis", g.grid());
  ctx.out["basis"] = basis_json(basis);
  ctx.out["relations_ok"] = check.ok;
  ctx.out["relation_report"] = report_json(check.residual_report);
  if (ctx.opts.output == OutputMode::pretty) {
    pretty_matrix("basis [e|f]", basis.to_matrix());
    pretty_report("relation_report", check.residual_report);
  }
  emit(ctx);
  return 0;
}

std::vector<IndexedVector> parse_indexed(const std::vector<std::string>& specs,
                                         const GridPtr& over) {
  std::vector<IndexedVector> out;
  for (const std::string& s : specs) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
      throw ParseError("partial-basis argument must be INDEX=FILE, got '" + s +
                       "'", 0, "INDEX=FILE");
    std::size_t idx = 0;
    try {
      idx = std::stoul(s.substr(0, eq));
    } catch (const std::logic_error&) {
      throw ParseError("bad index in partial-basis argument '" + s + "'", 0,
                       "positive integer");
    }
    out.emplace_back(idx, realize_vector(load_matrix_file(s.substr(eq + 1)), over));
  }
  return out;
}

int cmd_extend(CommandContext& ctx, const std::string& file,
               const std::vector<std::string>& e_specs,
               const std::vector<std::string>& f_specs) {
  GridPtr over = ctx.opts.grid_override();
  GenMatrix g = realize(load_matrix_file(file), over);
  SymplecticForm form = SymplecticForm::from_gram(g, ctx.cfg);
  std::vector<IndexedVector> e_part = parse_indexed(e_specs, over);
  std::vector<IndexedVector> f_part = parse_indexed(f_specs, over);
  SymplecticBasis basis = extend_symplectic_basis(form, e_part, f_part, ctx.cfg);
  RelationCheck check = check_symplectic_relations(form, basis, ctx.cfg);
  header(ctx, "extend", g.grid());
  ctx.out["basis"] = basis_json(basis);
  ctx.out["relations_ok"] = check.ok;
  ctx.out["relation_report"] = report_json(check.residual_report);
  if (ctx.opts.output == OutputMode::pretty) {
    pretty_matrix("basis [e|f]", basis.to_matrix());
    pretty_report("relation_report", check.residual_report);
  }
  emit(ctx);
  return 0;
}

Submodule submodule_from_file(const std::string& file, const GridPtr& over,
                              const ClassifierConfig& cfg) {
  GenMatrix m = realize(load_matrix_file(file), over);
  std::vector<GenVector> gens;
  for (std::size_t c = 0; c < m.cols(); ++c) gens.push_back(m.col(c));
  return Submodule::from_generators(std::move(gens), cfg);
}

int cmd_annihilator(CommandContext& ctx, const std::string& gram_file,
                    const std::string& sub_file) {
  GridPtr over = ctx.opts.grid_override();
  GenMatrix g = realize(load_matrix_file(gram_file), over);
  SymplecticForm form = SymplecticForm::from_gram(g, ctx.cfg);
  Submodule u = submodule_from_file(sub_file, over, ctx.cfg);
  Submodule ann = annihilator(form, u, ctx.cfg);
  header(ctx, "annihilator", g.grid());
  ctx.out["rank"] = u.rank();
  ctx.out["annihilator_rank"] = ann.rank();
  if (ann.rank() > 0)
    ctx.out["generators"] = matrix_json(GenMatrix::from_columns(ann.generators()));
  else
    ctx.out["generators"] = nullptr;
  if (ctx.opts.output == OutputMode::pretty) {
    std::printf("rank: %zu\nannihilator_rank: %zu\n", u.rank(), ann.rank());
    if (ann.rank() > 0)
      pretty_matrix("generators (columns)", GenMatrix::from_columns(ann.generators()));
  }
  emit(ctx);
  return 0;
}

int cmd_classify_submodule(CommandContext& ctx, const std::string& gram_file,
                           const std::string& sub_file) {
  GridPtr over = ctx.opts.grid_override();
  GenMatrix g = realize(load_matrix_file(gram_file), over);
  SymplecticForm form = SymplecticForm::from_gram(g, ctx.cfg);
  Submodule u = submodule_from_file(sub_file, over, ctx.cfg);
  SubmoduleClassification sc = classify_submodule(form, u, ctx.cfg);
  header(ctx, "classify-submodule", g.grid());
  ctx.out["class"] = to_string(sc.cls);
  ctx.out["rank"] = sc.rank;
  ctx.out["annihilator_rank"] = sc.annihilator_rank;
  ctx.out["restricted_det_report"] = report_json(sc.restricted_det);
  ctx.out["isotropy_report"] = report_json(sc.isotropy_residual);
  ctx.out["contains_annihilator"] = sc.contains_annihilator;
  if (ctx.opts.output == OutputMode::pretty) {
    std::printf("class: %s\nrank: %zu\nannihilator_rank: %zu\n"
                "contains_annihilator: %s\n",
                to_string(sc.cls).c_str(), sc.rank, sc.annihilator_rank,
                sc.contains_annihilator ? "true" : "false");
    pretty_report("restricted_det_report", sc.restricted_det);
    pretty_report("isotropy_report", sc.isotropy_residual);
  }
  emit(ctx);
  return 0;
}

int cmd_eigen(CommandContext& ctx, const std::string& file,
              const std::string& kind) {
  GenMatrix a = realize(load_matrix_file(file), ctx.opts.grid_override());
  header(ctx, "eigen", a.grid());
  ctx.out["kind"] = kind;
  if (kind == "hermitian") {
    HermitianEigen he = hermitian_eigentuple(a, ctx.cfg);
    ordered_json vals = ordered_json::array();
    for (const GenScalar& v : he.tuple.values) vals.push_back(scalar_json(v));
    ctx.out["values"] = vals;
    ctx.out["transform"] = matrix_json(he.u);
    if (ctx.opts.output == OutputMode::pretty) {
      for (std::size_t k = 0; k < he.tuple.values.size(); ++k)
        pretty_scalar(("lambda_" + std::to_string(k + 1)).c_str(),
                      he.tuple.values[k]);
      pretty_matrix("transform U", he.u);
    }
  } else {
    EigenTuple t = skew_eigentuple(a, ctx.cfg);
    ordered_json vals = ordered_json::array();
    for (const GenScalar& v : t.values) vals.push_back(scalar_json(v));
    ctx.out["values"] = vals;
    if (ctx.opts.output == OutputMode::pretty)
      for (std::size_t k = 0; k < t.values.size(); ++k)
        pretty_scalar(("theta_" + std::to_string(k + 1)).c_str(), t.values[k]);
  }
  emit(ctx);
  return 0;
}

int cmd_normal_form(CommandContext& ctx, const std::string& file) {
  GenMatrix a = realize(load_matrix_file(file), ctx.opts.grid_override());
  SkewNormalForm nf = skew_normal_form(a, ctx.cfg);
  header(ctx, "normal-form", a.grid());
  ordered_json lambdas = ordered_json::array();
  for (std::size_t k = 0; k < nf.lambdas.size(); ++k)
    lambdas.push_back(ordered_json{{"value", scalar_json(nf.lambdas[k])},
                                   {"report", report_json(nf.lambda_reports[k])},
                                   {"warning", nf.indeterminate[k] != 0}});
  ctx.out["lambdas"] = lambdas;
  ctx.out["block_count"] = nf.block_count;
  ctx.out["zero_block_count"] = nf.zero_block_count;
  ctx.out["transform"] = matrix_json(nf.v);
  if (ctx.opts.output == OutputMode::pretty) {
    for (std::size_t k = 0; k < nf.lambdas.size(); ++k) {
      pretty_scalar(("lambda_" + std::to_string(k + 1)).c_str(), nf.lambdas[k]);
      pretty_report(("lambda_" + std::to_string(k + 1) + "_report").c_str(),
                    nf.lambda_reports[k]);
    }
    std::printf("block_count: %zu\nzero_block_count: %zu\n", nf.block_count,
                nf.zero_block_count);
    pretty_matrix("transform V", nf.v);
  }
  emit(ctx);
  return 0;
}

int cmd_check_eigenvalue(CommandContext& ctx, const std::string& file,
                         const std::string& lambda, bool want_vector) {
  GenMatrix a = realize(load_matrix_file(file), ctx.opts.grid_override());
  GenScalar lam = eval_scalar(lambda, a.grid());
  EigenvalueCheck chk = is_eigenvalue(a, lam, ctx.cfg);
  header(ctx, "check-eigenvalue", a.grid());
  ctx.out["lambda"] = lambda;
  ctx.out["is_eigenvalue"] = chk.is_eigenvalue;
  ctx.out["det_report"] = report_json(chk.det_report);
  if (ctx.opts.output == OutputMode::pretty) {
    std::printf("is_eigenvalue: %s\n", chk.is_eigenvalue ? "true" : "false");
    pretty_report("det_report", chk.det_report);
  }
  if (want_vector && chk.is_eigenvalue) {
    GenVector v = eigenpair_from_root(a, lam, ctx.cfg);
    ctx.out["eigenvector"] = vector_json(v);
    if (ctx.opts.output == OutputMode::pretty) pretty_vector("eigenvector", v);
  }
  emit(ctx);
  return 0;
}

ordered_json error_json(const char* type, const std::string& message) {
  return ordered_json{{"error", ordered_json{{"type", type}, {"message", message}}}};
}

void print_error(const GlobalOpts& opts, const char* type,
                 const std::string& message, const ordered_json& extra = {}) {
  if (opts.output == OutputMode::json_mode) {
    ordered_json j = error_json(type, message);
    for (const auto& [k, v] : extra.items()) j["error"][k] = v;
    std::printf("%s\n", j.dump(2).c_str());
  }
  std::fprintf(stderr, "error (%s): %s\n", type, message.c_str());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"operations on generalized-number nets over a finite "
               "epsilon grid"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts opts;
  std::string output = "pretty";
  app.add_option("--grid", opts.grid_spec,
                 "grid override: dyadic:K_MIN:K_MAX | geometric:R:K_MIN:K_MAX "
                 "| explicit:V1,V2,...");
  app.add_option("--m-neg", opts.m_neg, "negligibility exponent threshold");
  app.add_option("--m-inv", opts.m_inv, "invertibility exponent threshold");
  app.add_option("--tail", opts.tail, "tail fraction in (0,1]");
  app.add_option("--noise-floor", opts.noise_floor,
                 "roundoff absorption floor (absolute)");
  app.add_option("--noise-slope-max", opts.noise_slope_max,
                 "max fitted slope still absorbed by the noise floor");
  app.add_option("--output", output, "pretty | json")
      ->check(CLI::IsMember({"pretty", "json"}));

  std::string expr, file, rhs, shift, lambda;
  std::string kind = "hermitian";
  bool want_vector = false;
  std::vector<std::string> e_specs, f_specs;

  CLI::App* c_classify = app.add_subcommand("classify", "classify a net expression");
  c_classify->add_option("expression", expr)->required();

  CLI::App* c_det = app.add_subcommand("det", "determinant of a matrix file");
  c_det->add_option("file", file)->required();
  c_det->add_option("--shift", shift, "expression s: use A - s*I");

  CLI::App* c_inv = app.add_subcommand("invertible", "invertibility verdict");
  c_inv->add_option("file", file)->required();

  CLI::App* c_solve = app.add_subcommand("solve", "solve A x = b");
  c_solve->add_option("file", file)->required();
  c_solve->add_option("rhs", rhs)->required();

  CLI::App* c_sympl =
      app.add_subcommand("symplectic-basis", "symplectic basis of a Gramian file");
  c_sympl->add_option("file", file)->required();

  CLI::App* c_ext = app.add_subcommand(
      "extend", "complete partial symplectic data to a full basis");
  c_ext->add_option("file", file)->required();
  c_ext->add_option("--e", e_specs, "e-vector as INDEX=VECTOR_FILE (repeatable)");
  c_ext->add_option("--f", f_specs, "f-vector as INDEX=VECTOR_FILE (repeatable)");

  CLI::App* c_ann = app.add_subcommand("annihilator",
                                       "symplectic annihilator of a submodule");
  c_ann->add_option("gram", file)->required();
  c_ann->add_option("submodule", rhs)->required();

  CLI::App* c_cls = app.add_subcommand("classify-submodule",
                                       "submodule type under the form");
  c_cls->add_option("gram", file)->required();
  c_cls->add_option("submodule", rhs)->required();

  CLI::App* c_eig = app.add_subcommand("eigen", "distinguished eigenvalue tuple");
  c_eig->add_option("file", file)->required();
  c_eig->add_option("--kind", kind, "hermitian | skew")
      ->check(CLI::IsMember({"hermitian", "skew"}));

  CLI::App* c_nf = app.add_subcommand("normal-form",
                                      "skew-symmetric block normal form");
  c_nf->add_option("file", file)->required();

  CLI::App* c_chk = app.add_subcommand("check-eigenvalue",
                                       "determinant eigenvalue criterion");
  c_chk->add_option("file", file)->required();
  c_chk->add_option("--lambda", lambda, "candidate eigenvalue expression")
      ->required();
  c_chk->add_flag("--eigenvector", want_vector, "also emit a unit eigenvector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage mistakes share the input-error exit code; --help stays 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opts.output = output == "json" ? OutputMode::json_mode : OutputMode::pretty;

  try {
    CommandContext ctx{opts, opts.config(), ordered_json::object()};
    if (c_classify->parsed()) return cmd_classify(ctx, expr);
    if (c_det->parsed())
      return cmd_det(ctx, file,
                     c_det->count("--shift") ? std::optional<std::string>(shift)
                                             : std::nullopt);
    if (c_inv->parsed()) return cmd_invertible(ctx, file);
    if (c_solve->parsed()) return cmd_solve(ctx, file, rhs);
    if (c_sympl->parsed()) return cmd_symplectic_basis(ctx, file);
    if (c_ext->parsed()) return cmd_extend(ctx, file, e_specs, f_specs);
    if (c_ann->parsed()) return cmd_annihilator(ctx, file, rhs);
    if (c_cls->parsed()) return cmd_classify_submodule(ctx, file, rhs);
    if (c_eig->parsed()) return cmd_eigen(ctx, file, kind);
    if (c_nf->parsed()) return cmd_normal_form(ctx, file);
    if (c_chk->parsed()) return cmd_check_eigenvalue(ctx, file, lambda, want_vector);
    std::fprintf(stderr, "no subcommand\n");
    return 2;
  } catch (const ParseError& e) {
    print_error(opts, "parse", e.what(),
                ordered_json{{"offset", e.offset}, {"expected", e.expected}});
    return 2;
  } catch (const EvalError& e) {
    print_error(opts, "eval", e.what(),
                ordered_json{{"sample_index", e.sample_index}});
    return 2;
  } catch (const ConfigError& e) {
    print_error(opts, "config", e.what());
    return 2;
  } catch (const StructuralError& e) {
    print_error(opts, "structural", e.what());
    return 2;
  } catch (const NonInvertibleError& e) {
    print_error(opts, "precondition", e.what(),
                ordered_json{{"det_report", report_json(e.report)}});
    return 3;
  } catch (const PreconditionError& e) {
    print_error(opts, "precondition", e.what());
    return 3;
  } catch (const PostconditionError& e) {
    print_error(opts, "postcondition", e.what());
    return 4;
  }
}
