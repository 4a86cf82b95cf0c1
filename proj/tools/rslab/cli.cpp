#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "output.hpp"
#include "rslab/coincnf.hpp"
#include "rslab/error.hpp"
#include "rslab/experiments.hpp"
#include "rslab/fourier.hpp"
#include "rslab/gf.hpp"
#include "rslab/parallel.hpp"
#include "rslab/randmodel.hpp"
#include "rslab/recovery.hpp"
#include "rslab/rscode.hpp"
#include "selfcheck.hpp"

namespace rslab::cli {
namespace {

using json = nlohmann::ordered_json;
using gf::Elem;
using gf::Field;

struct Common {
  std::string out_path;
  std::string seed_text;
  std::size_t workers = 0;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::uint64_t parse_u64(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::UsageError, std::string("cannot parse ") + what + " '" + text + "'");
  }
}

std::uint64_t resolve_seed(const Common& c) {
  if (!c.seed_text.empty()) return parse_u64(c.seed_text, "--seed");
  if (const char* env = std::getenv("RSLAB_SEED"); env != nullptr && *env != '\0') return parse_u64(env, "RSLAB_SEED");
  return randmodel::kDefaultSeed;
}

std::size_t resolve_workers(const Common& c) { return c.workers == 0 ? default_workers() : c.workers; }

void emit(const Common& c, const std::string& content, const Io& io) {
  if (c.out_path.empty()) {
    io.out << content;
  } else {
    write_atomic(c.out_path, content);
  }
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--out", c.out_path, "Write the result to this file (atomically) instead of stdout");
}

void add_random(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed_text, "Master seed (decimal or 0x hex); default RSLAB_SEED or 0xA5EED");
  app->add_option("--workers", c.workers, "Worker threads (default: available parallelism)");
}

std::string header_line(const std::string& command, const std::string& fields) {
  return "# rslab " + command + (fields.empty() ? "" : " " + fields) + "\n";
}

rs::RsCode make_code(const Field& f, int degree, std::optional<std::size_t> length) {
  if (!length || *length == f.order()) return rs::RsCode::full(f, degree);
  if (*length > f.order()) throw Error(Errc::SizeExceedsField, "length exceeds q");
  std::vector<Elem> positions(*length);
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = Elem(static_cast<std::uint32_t>(i));
  return rs::RsCode::punctured(f, degree, std::move(positions));
}

// Line i holds the elements of A_i as canonical indices separated by commas or
// spaces; a blank line (or "-") is the empty list and lines starting with '#'
// are comments.
recovery::Instance read_lists(const Field& f, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UsageError, "cannot read lists file '" + path + "'");
  std::vector<std::vector<Elem>> lists;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream tokens(line);
    std::string tok;
    std::vector<Elem> list;
    while (tokens >> tok) {
      if (tok == "-") continue;
      list.push_back(f.element(static_cast<std::uint32_t>(parse_u64(tok, "list element"))));
    }
    lists.push_back(std::move(list));
  }
  if (lists.empty()) throw Error(Errc::UsageError, "lists file '" + path + "' has no lists");
  return recovery::Instance::from_lists(f, lists);
}

// One "x,y" pair per line; the instance is full-length.
recovery::Instance read_points(const Field& f, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UsageError, "cannot read points file '" + path + "'");
  std::vector<rs::Point> points;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream tokens(line);
    std::string x;
    std::string y;
    if (!(tokens >> x)) continue;
    std::string extra;
    if (!(tokens >> y) || (tokens >> extra)) throw Error(Errc::UsageError, "points file lines must be x,y");
    points.emplace_back(f.element(static_cast<std::uint32_t>(parse_u64(x, "x"))),
                        f.element(static_cast<std::uint32_t>(parse_u64(y, "y"))));
  }
  return recovery::Instance::from_points(f, points);
}

std::string join_coeffs(const rs::Coeffs& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i].index());
  return s;
}

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

GridSpec parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw Error(Errc::UsageError, "grid must be LO:HI:N");
  try {
    GridSpec g;
    g.lo = std::stod(text.substr(0, a));
    g.hi = std::stod(text.substr(a + 1, b - a - 1));
    g.n = static_cast<std::size_t>(parse_u64(text.substr(b + 1), "grid size"));
    return g;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(Errc::UsageError, "grid must be LO:HI:N");
  }
}

// ---- wtdist ----------------------------------------------------------------

struct WtdistArgs {
  Common c;
  std::string field;
  int degree = 0;
  std::optional<std::size_t> length;
  std::string method = "formula";
  bool brute_force = false;
};

int cmd_wtdist(WtdistArgs a, const Io& io) {
  if (a.brute_force) a.method = "brute";
  const Field f = Field::parse(a.field);
  const auto code = make_code(f, a.degree, a.length);
  std::optional<rs::WeightDistribution> formula;
  std::optional<rs::WeightDistribution> brute;
  if (a.method != "brute") formula = rs::mds_weight_distribution(f.order(), code.length(), code.dimension());
  if (a.method != "formula") brute = rs::weight_distribution_brute_force(code);
  const auto& shown = formula ? *formula : *brute;

  std::string s = header_line("wtdist", "field=" + f.name() + " degree=" + std::to_string(a.degree) +
                                            " length=" + std::to_string(code.length()) + " method=" + a.method);
  s += "weight,count\n";
  for (const auto& [w, n] : shown.nonzero()) s += std::to_string(w) + "," + n.str() + "\n";
  if (formula && brute) s += std::string("# formula_matches_brute_force=") + (*formula == *brute ? "true" : "false") + "\n";
  emit(a.c, s, io);
  if (formula && brute && *formula != *brute) {
    io.err << "invariant failure: closed form differs from brute force\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- dual-check ------------------------------------------------------------

struct DualArgs {
  Common c;
  std::string field;
  int degree = 0;
  std::optional<std::size_t> length;
};

int cmd_dual(const DualArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  const auto code = make_code(f, a.degree, a.length);
  const std::size_t q = f.order();
  std::string s = header_line("dual-check", "field=" + f.name() + " degree=" + std::to_string(a.degree) +
                                                " length=" + std::to_string(code.length()));
  bool ok = true;
  if (code.is_full_length()) {
    const auto gen = rs::generator(code);
    s += "candidate,degree,dim_code,dim_candidate,dim_sum,orthogonal,verdict\n";
    auto row = [&](const char* name, int deg, bool must_pass) {
      rs::LinearCode cand{f, q, {}};
      if (deg >= 0 && deg < static_cast<int>(q)) cand = rs::generator(rs::RsCode::full(f, deg));
      const bool valid = deg < static_cast<int>(q);
      const bool orth = valid && rs::orthogonal(gen, cand);
      const std::size_t sum = code.dimension() + cand.dimension();
      const bool pass = valid && orth && sum == q;
      if (must_pass && !pass) ok = false;
      s += std::string(name) + "," + std::to_string(deg) + "," + std::to_string(code.dimension()) + "," +
           std::to_string(cand.dimension()) + "," + std::to_string(sum) + "," + (orth ? "true" : "false") + "," +
           (pass ? "dual" : "not dual") + "\n";
    };
    row("implemented", static_cast<int>(q) - a.degree - 2, true);
    row("alternative", static_cast<int>(q) - a.degree - 1, false);
    const auto dual = rs::dual_code(code);
    if (!rs::orthogonal(gen, dual.code) || dual.code.dimension() + code.dimension() != q) ok = false;
  } else {
    const auto report = rs::compare_punctured_dual(code);
    s += "quantity,value\n";
    s += "dual_dimension," + std::to_string(report.dual_dimension) + "\n";
    s += "plain_degree," + std::to_string(report.plain_degree) + "\n";
    s += std::string("weight_distributions_match,") + (report.weight_distributions_match ? "true" : "false") + "\n";
    s += std::string("codes_equal,") + (report.codes_equal ? "true" : "false") + "\n";
    ok = report.dual_dimension + code.dimension() == code.length();
  }
  emit(a.c, s, io);
  if (!ok) {
    io.err << "invariant failure: dual check failed\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- recover / agree ---------------------------------------------------------

struct RecoverArgs {
  Common c;
  std::string field;
  int degree = 0;
  std::string lists;
  bool count = false;
  std::optional<std::size_t> witnesses;
  bool check = false;
};

int cmd_recover(const RecoverArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  const auto inst = read_lists(f, a.lists);
  const auto code = recovery::code_for(inst, a.degree);
  std::string s;
  bool ok = true;
  if (a.count || a.witnesses) {
    recovery::SearchOptions options;
    if (a.witnesses) options.witness_cap = *a.witnesses;
    const auto res = recovery::count(code, inst, options);
    s += std::string("found=") + (res.found ? "true" : "false");
    if (a.count) s += " count=" + std::to_string(res.count);
    s += "\n";
    if (a.witnesses) {
      for (const auto& w : res.witnesses) s += "witness=" + join_coeffs(w) + "\n";
    }
    if (a.check) ok = recovery::count_by_enumeration(code, inst).count == res.count;
  } else {
    const bool found = recovery::decide(code, inst);
    s += std::string("found=") + (found ? "true" : "false") + "\n";
    if (a.check) ok = recovery::decide_by_enumeration(code, inst) == found;
  }
  emit(a.c, s, io);
  if (!ok) {
    io.err << "invariant failure: search disagrees with enumeration\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct AgreeArgs {
  Common c;
  std::string field;
  int degree = 0;
  std::string points;
  std::string lists;
};

int cmd_agree(const AgreeArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  if (a.points.empty() == a.lists.empty()) throw Error(Errc::UsageError, "give exactly one of --points and --lists");
  const auto inst = a.points.empty() ? read_lists(f, a.lists) : read_points(f, a.points);
  const auto code = recovery::code_for(inst, a.degree);
  const auto res = recovery::max_agreement(code, inst);
  emit(a.c, "max_agreement=" + std::to_string(res.value) + " witness=" + join_coeffs(res.witness) + "\n", io);
  return kExitOk;
}

// ---- predict ------------------------------------------------------------------

struct PredictArgs {
  Common c;
  std::string field;
  int degree = 0;
  double p = 0.0;
  std::optional<double> eps;
  std::optional<std::uint32_t> agreement;
  bool as_json = false;
};

int cmd_predict(const PredictArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  const std::uint64_t q = f.order();
  const int d = a.degree;
  const double p = a.p;
  const double ex_ln = static_cast<double>(randmodel::log_expected_count(q, d, p));
  std::optional<double> upper_ln;
  if (p > 0.0) upper_ln = static_cast<double>(randmodel::log_second_moment_upper(q, d, p));
  std::optional<double> exact_ln;
  if (randmodel::second_moment_exact_available(q, d)) exact_ln = static_cast<double>(randmodel::log_second_moment_exact(q, d, p));
  const double pz = randmodel::pz_lower(q, d, p);
  std::uint32_t union_point = static_cast<std::uint32_t>(q);
  for (std::uint32_t ag = 0; ag <= q; ++ag) {
    if (randmodel::agreement_tail(q, d, p, ag) < 0.01) {
      union_point = ag;
      break;
    }
  }
  std::optional<double> chernoff;
  if (a.eps) chernoff = randmodel::chernoff_tail(q, p, *a.eps);
  std::optional<double> tail_ln;
  if (a.agreement) tail_ln = static_cast<double>(randmodel::log_agreement_tail(q, d, p, *a.agreement));

  std::string s;
  if (a.as_json) {
    json j;
    j["command"] = "predict";
    j["field"] = f.name();
    j["q"] = q;
    j["degree"] = d;
    j["p"] = p;
    j["expected_count"] = std::exp(ex_ln);
    j["expected_count_ln"] = ex_ln;
    j["markov_upper"] = randmodel::markov_upper(q, d, p);
    j["second_moment_upper"] = upper_ln ? json(std::exp(*upper_ln)) : json(nullptr);
    j["second_moment_upper_ln"] = upper_ln ? json(*upper_ln) : json(nullptr);
    j["second_moment_exact"] = exact_ln ? json(std::exp(*exact_ln)) : json(nullptr);
    j["second_moment_exact_ln"] = exact_ln ? json(*exact_ln) : json(nullptr);
    j["pz_lower"] = pz;
    j["agreement_union_point"] = union_point;
    j["chernoff_list_size"] = chernoff ? json(*chernoff) : json(nullptr);
    if (a.eps) j["eps"] = *a.eps;
    if (a.agreement) {
      j["agreement"] = *a.agreement;
      j["agreement_tail"] = std::exp(*tail_ln);
      j["agreement_tail_ln"] = *tail_ln;
    }
    s = j.dump(2) + "\n";
  } else {
    auto opt_prob = [](std::optional<double> v) { return v ? fmt_prob(std::exp(*v)) : std::string(); };
    auto opt_ln = [](std::optional<double> v) { return v ? fmt_real(*v) : std::string(); };
    s = header_line("predict", "field=" + f.name() + " degree=" + std::to_string(d) + " p=" + fmt_real(p));
    s += "quantity,value,value_ln\n";
    s += "expected_count," + fmt_prob(std::exp(ex_ln)) + "," + fmt_real(ex_ln) + "\n";
    s += "markov_upper," + fmt_prob(randmodel::markov_upper(q, d, p)) + ",\n";
    s += "second_moment_upper," + opt_prob(upper_ln) + "," + opt_ln(upper_ln) + "\n";
    s += "second_moment_exact," + opt_prob(exact_ln) + "," + opt_ln(exact_ln) + "\n";
    s += "pz_lower," + fmt_prob(pz) + ",\n";
    s += "agreement_union_point," + std::to_string(union_point) + ",\n";
    if (chernoff) s += "chernoff_list_size," + fmt_prob(*chernoff) + ",\n";
    if (tail_ln) s += "agreement_tail_at_" + std::to_string(*a.agreement) + "," + fmt_prob(std::exp(*tail_ln)) + "," + fmt_real(*tail_ln) + "\n";
  }
  emit(a.c, s, io);
  return kExitOk;
}

// ---- fourier-check ---------------------------------------------------------------

struct FourierArgs {
  Common c;
  std::string field;
  int degree = 0;
  double p = 0.5;
  std::uint64_t trials = 1000;
};

int cmd_fourier(const FourierArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  const auto code = rs::RsCode::full(f, a.degree);
  const std::uint64_t seed = resolve_seed(a.c);
  const auto report = fourier::fourier_check(code, a.p, a.trials, seed, resolve_workers(a.c));
  std::string s = header_line("fourier-check", "field=" + f.name() + " degree=" + std::to_string(a.degree) +
                                                   " p=" + fmt_real(a.p) + " trials=" + std::to_string(a.trials) +
                                                   " seed=" + fmt_seed(seed));
  s += "trial,main_abs,r_abs,count_direct,count_fourier\n";
  for (const auto& row : report.rows) {
    s += std::to_string(row.trial) + "," + fmt_real(row.main_abs) + "," + fmt_real(row.r_abs) + "," +
         std::to_string(row.count_direct) + "," + fmt_real(row.count_fourier) + "\n";
  }
  const double z = report.stderr_r_squared > 0.0
                       ? (report.mean_r_squared - report.exact_r_squared) / report.stderr_r_squared
                       : 0.0;
  s += "summary,exact_r2=" + fmt_real(report.exact_r_squared) + ",mean_r2=" + fmt_real(report.mean_r_squared) +
       ",stderr_r2=" + fmt_real(report.stderr_r_squared) + ",z=" + fmt_prob(z) + "\n";
  emit(a.c, s, io);
  const double tol = 1e-6 * std::pow(static_cast<double>(f.order()), a.degree + 1);
  if (report.max_count_error > tol) {
    io.err << "invariant failure: Fourier count differs from the direct count by " << report.max_count_error << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- scan -----------------------------------------------------------------------

struct ScanArgs {
  Common c;
  std::string spec;
  std::string field;
  int degree = 0;
  std::uint32_t b = 2;
  std::uint32_t l = 8;
  std::string grid;
  bool log_grid = false;
  std::uint64_t trials = 1000;
};

int cmd_scan(const ScanArgs& a, const Io& io) {
  std::optional<experiments::ApSpec> ap;
  experiments::MonotoneFunctionSpec spec = experiments::TribesSpec{};
  std::string desc;
  if (a.spec == "ap") {
    if (a.field.empty()) throw Error(Errc::UsageError, "--spec ap needs --field");
    ap = experiments::ApSpec{Field::parse(a.field), a.degree};
    rs::RsCode::full(ap->field, a.degree);  // validates the degree
    spec = *ap;
    desc = "spec=ap field=" + ap->field.name() + " degree=" + std::to_string(a.degree);
  } else if (a.spec == "tribes") {
    spec = experiments::TribesSpec{a.b, a.l};
    desc = "spec=tribes b=" + std::to_string(a.b) + " l=" + std::to_string(a.l);
    experiments::tribes_analytic(a.b, a.l, 0.5);  // validates b and l
  } else {
    throw Error(Errc::UsageError, "--spec must be ap or tribes");
  }
  std::vector<double> grid;
  if (!a.grid.empty()) {
    const auto g = parse_grid(a.grid);
    grid = a.log_grid ? experiments::log_grid(g.lo, g.hi, g.n) : experiments::linear_grid(g.lo, g.hi, g.n);
  } else {
    grid = ap ? experiments::default_ap_grid(*ap) : experiments::linear_grid(0.0, 1.0, 21);
  }
  const std::uint64_t seed = resolve_seed(a.c);
  const auto result = experiments::scan(spec, grid, a.trials, seed, resolve_workers(a.c));

  std::optional<experiments::PredictorCheck> predictors;
  if (ap) predictors = experiments::check_predictors(result, ap->field.order(), a.degree);

  std::string s = header_line("scan", desc + " trials=" + std::to_string(a.trials) + " seed=" + fmt_seed(seed));
  s += "p,fhat,ci_lo,ci_hi,trials,successes,smoothed";
  s += ap ? ",markov,pz\n" : ",analytic\n";
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    s += fmt_real(result.grid[i]) + "," + fmt_prob(result.fhat[i]) + "," + fmt_prob(result.ci[i].lo) + "," +
         fmt_prob(result.ci[i].hi) + "," + std::to_string(result.trials) + "," + std::to_string(result.successes[i]) +
         "," + fmt_prob(result.smoothed[i]);
    if (ap) {
      s += "," + fmt_prob(predictors->markov[i]) + "," + fmt_prob(predictors->pz[i]) + "\n";
    } else {
      s += "," + fmt_prob(experiments::tribes_analytic(a.b, a.l, result.grid[i])) + "\n";
    }
  }
  s += "# crossing=" + (result.crossing ? fmt_prob(*result.crossing) : std::string("none")) + " crossing_ci=" +
       fmt_prob(result.crossing_ci.lo) + ":" + fmt_prob(result.crossing_ci.hi) +
       " isotone=" + (result.isotone ? "true" : "false") + "\n";
  if (ap) {
    s += std::string("# predictors=") + (predictors->ok ? "ok" : "violated");
    if (const auto fit = experiments::fit_fk_constant(result, experiments::input_width(spec))) {
      s += " window_lo=" + fmt_prob(fit->p_lo) + " window_hi=" + fmt_prob(fit->p_hi) + " eta=" + fmt_prob(fit->eta) +
           " fitted_B=" + fmt_prob(fit->fitted_b);
    }
    s += "\n";
  } else {
    s += "# closed_form_crossing=" + fmt_prob(experiments::tribes_crossing(a.b, a.l)) + "\n";
  }
  emit(a.c, s, io);
  if (!result.isotone || (predictors && !predictors->ok)) {
    io.err << "invariant failure: " << (result.isotone ? "predictor bounds violated" : "estimates not isotone") << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- agree-exp ---------------------------------------------------------------------

struct AgreeExpArgs {
  Common c;
  std::string field;
  int degree = 0;
  double p = 0.25;
  std::uint64_t trials = 1000;
};

int cmd_agree_exp(const AgreeExpArgs& a, const Io& io) {
  const Field f = Field::parse(a.field);
  const std::uint64_t seed = resolve_seed(a.c);
  const auto r = experiments::agreement_experiment(f, a.degree, a.p, a.trials, seed, resolve_workers(a.c));
  std::string s = header_line("agree-exp", "field=" + f.name() + " degree=" + std::to_string(a.degree) +
                                               " p=" + fmt_real(a.p) + " trials=" + std::to_string(a.trials) +
                                               " seed=" + fmt_seed(seed));
  s += "agreement,count\n";
  for (std::size_t v = 0; v < r.histogram.size(); ++v) s += std::to_string(v) + "," + std::to_string(r.histogram[v]) + "\n";
  s += "# union_bound_point=" + std::to_string(r.union_bound_point) + " formula_point=" + fmt_prob(r.formula_point) +
       " window_lo=" + fmt_prob(r.window_lo) + " fraction_at_or_below_union=" + fmt_prob(r.fraction_at_or_below_union) +
       " median=" + std::to_string(r.median) + " min=" + std::to_string(r.min) + " max=" + std::to_string(r.max) +
       " width=" + std::to_string(r.max - r.min) + "\n";
  emit(a.c, s, io);
  if (r.fraction_at_or_below_union < 0.99) {
    io.err << "invariant failure: max agreement above the union-bound point in more than 1% of trials\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- coin ------------------------------------------------------------------------------

struct CoinArgs {
  Common c;
  double p = 0.25;
  std::uint32_t s = 8;
  std::optional<double> bias;
  std::uint64_t trials = 100'000;
  std::string dimacs;
};

int cmd_coin(const CoinArgs& a, const Io& io) {
  const auto plan = coin::plan_cnf(a.p, a.s);
  const auto bounds = coin::sandwich(plan);
  json j;
  j["command"] = "coin";
  j["p"] = a.p;
  j["s"] = a.s;
  j["k"] = plan.k;
  j["ell"] = plan.ell();
  j["t"] = plan.t;
  j["clauses"] = plan.clauses.size();
  j["fair_probability"] = {{"exact", bounds.value.str()}, {"value", bounds.value.convert_to<double>()}};
  j["sandwich"] = {{"lower", bounds.lower.convert_to<double>()},
                   {"upper", bounds.upper.convert_to<double>()},
                   {"holds", bounds.holds}};
  if (a.bias) {
    const std::uint64_t seed = resolve_seed(a.c);
    const auto r = coin::measure_bias(plan, *a.bias, a.trials, seed, resolve_workers(a.c));
    j["seed"] = fmt_seed(seed);
    j["bias_report"] = {{"input_bias", r.input_bias},
                        {"trials", r.trials},
                        {"successes", r.successes},
                        {"estimate", r.estimate},
                        {"ci_lo", r.ci.lo},
                        {"ci_hi", r.ci.hi},
                        {"closed_form", r.closed_form},
                        {"exact_fair", r.exact_fair ? json(*r.exact_fair) : json(nullptr)},
                        {"window_lo", r.window_lo},
                        {"window_hi", r.window_hi}};
  }
  if (!a.dimacs.empty()) write_atomic(a.dimacs, coin::to_dimacs(plan));
  emit(a.c, j.dump(2) + "\n", io);
  if (!bounds.holds) {
    io.err << "invariant failure: sandwich bound violated\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---- selfcheck -----------------------------------------------------------------------------

struct SelfcheckArgs {
  Common c;
  bool fast = false;
  std::string mutate;
};

int cmd_selfcheck(const SelfcheckArgs& a, const Io& io) {
  SelfcheckOptions opt;
  opt.fast = a.fast;
  opt.mutate = a.mutate;
  opt.seed = resolve_seed(a.c);
  opt.workers = resolve_workers(a.c);
  const auto rows = run_selfcheck(opt);
  std::size_t failed = 0;
  std::string s = header_line("selfcheck", std::string("mode=") + (a.fast ? "fast" : "full") + " seed=" + fmt_seed(opt.seed) +
                                               (a.mutate.empty() ? "" : " mutate=" + a.mutate));
  s += "module,check,result,detail\n";
  for (const auto& row : rows) {
    std::string detail = row.detail;
    for (char& ch : detail) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    s += row.module + "," + row.check + "," + (row.pass ? "PASS" : "FAIL") + "," + detail + "\n";
    failed += row.pass ? 0 : 1;
  }
  s += "# passed=" + std::to_string(rows.size() - failed) + " failed=" + std::to_string(failed) + "\n";
  emit(a.c, s, io);
  return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random list recovery of Reed-Solomon codes: exact counts, predictors and experiments", "rslab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  WtdistArgs wt;
  auto* wt_cmd = app.add_subcommand("wtdist", "Weight distribution of RS[q,d] (or its punctured restriction)");
  wt_cmd->add_option("--field", wt.field, "Field as P^K")->required();
  wt_cmd->add_option("--degree", wt.degree, "Degree bound d")->required();
  wt_cmd->add_option("--length", wt.length, "Puncture to the first N field elements");
  auto* wt_method =
      wt_cmd->add_option("--method", wt.method, "formula | brute | both")->check(CLI::IsMember({"formula", "brute", "both"}));
  wt_cmd->add_flag("--brute-force", wt.brute_force, "Same as --method brute")->excludes(wt_method);
  add_output(wt_cmd, wt.c);

  DualArgs du;
  auto* du_cmd = app.add_subcommand("dual-check", "Verify the dual code and report the degree q-d-1 alternative");
  du_cmd->add_option("--field", du.field, "Field as P^K")->required();
  du_cmd->add_option("--degree", du.degree, "Degree bound d")->required();
  du_cmd->add_option("--length", du.length, "Puncture to the first N field elements");
  add_output(du_cmd, du.c);

  RecoverArgs rc;
  auto* rc_cmd = app.add_subcommand("recover", "Decide or count codewords inside the given lists");
  rc_cmd->add_option("--field", rc.field, "Field as P^K")->required();
  rc_cmd->add_option("--degree", rc.degree, "Degree bound d")->required();
  rc_cmd->add_option("--lists", rc.lists, "Lists file: one line per position")->required();
  rc_cmd->add_flag("--count", rc.count, "Count all codewords");
  rc_cmd->add_option("--witnesses", rc.witnesses, "Print up to N witness coefficient vectors");
  rc_cmd->add_flag("--check", rc.check, "Cross-check against full enumeration");
  add_output(rc_cmd, rc.c);

  AgreeArgs ag;
  auto* ag_cmd = app.add_subcommand("agree", "Largest agreement of a codeword with the lists");
  ag_cmd->add_option("--field", ag.field, "Field as P^K")->required();
  ag_cmd->add_option("--degree", ag.degree, "Degree bound d")->required();
  ag_cmd->add_option("--points", ag.points, "Points file: one x,y pair per line");
  ag_cmd->add_option("--lists", ag.lists, "Lists file: one line per position");
  add_output(ag_cmd, ag.c);

  PredictArgs pr;
  auto* pr_cmd = app.add_subcommand("predict", "Closed-form predictors for iid(p) instances");
  pr_cmd->add_option("--field", pr.field, "Field as P^K")->required();
  pr_cmd->add_option("--degree", pr.degree, "Degree bound d")->required();
  pr_cmd->add_option("--p", pr.p, "Inclusion probability")->required();
  pr_cmd->add_option("--eps", pr.eps, "Also report the Chernoff bound on list sizes");
  pr_cmd->add_option("--a", pr.agreement, "Also report the agreement union bound at this agreement");
  pr_cmd->add_flag("--json", pr.as_json, "Emit JSON instead of CSV");
  add_output(pr_cmd, pr.c);

  FourierArgs fo;
  auto* fo_cmd = app.add_subcommand("fourier-check", "Fourier-side count and R-term on random instances");
  fo_cmd->add_option("--field", fo.field, "Field as P^K")->required();
  fo_cmd->add_option("--degree", fo.degree, "Degree bound d")->required();
  fo_cmd->add_option("--p", fo.p, "Inclusion probability")->required();
  fo_cmd->add_option("--trials", fo.trials, "Number of instances");
  add_random(fo_cmd, fo.c);
  add_output(fo_cmd, fo.c);

  ScanArgs sc;
  auto* sc_cmd = app.add_subcommand("scan", "Monte Carlo threshold scan");
  sc_cmd->add_option("--spec", sc.spec, "ap | tribes")->required();
  sc_cmd->add_option("--field", sc.field, "Field as P^K (ap)");
  sc_cmd->add_option("--degree", sc.degree, "Degree bound d (ap)");
  sc_cmd->add_option("--b", sc.b, "Block size (tribes)");
  sc_cmd->add_option("--l", sc.l, "Number of blocks (tribes)");
  sc_cmd->add_option("--grid", sc.grid, "LO:HI:N");
  sc_cmd->add_flag("--log-grid", sc.log_grid, "Space the grid logarithmically");
  sc_cmd->add_option("--trials", sc.trials, "Trials per grid point");
  add_random(sc_cmd, sc.c);
  add_output(sc_cmd, sc.c);

  AgreeExpArgs ae;
  auto* ae_cmd = app.add_subcommand("agree-exp", "Distribution of the max agreement for iid(p) instances");
  ae_cmd->add_option("--field", ae.field, "Field as P^K")->required();
  ae_cmd->add_option("--degree", ae.degree, "Degree bound d")->required();
  ae_cmd->add_option("--p", ae.p, "Inclusion probability")->required();
  ae_cmd->add_option("--trials", ae.trials, "Number of instances");
  add_random(ae_cmd, ae.c);
  add_output(ae_cmd, ae.c);

  CoinArgs co;
  auto* co_cmd = app.add_subcommand("coin", "Biased-coin CNF plan and its measured bias");
  co_cmd->add_option("--p", co.p, "Target probability")->required();
  co_cmd->add_option("--s", co.s, "Size parameter: fewer than s^2 variables")->required();
  co_cmd->add_option("--bias", co.bias, "Input bias for a Monte Carlo measurement");
  co_cmd->add_option("--trials", co.trials, "Monte Carlo trials (at least 10^4)");
  co_cmd->add_option("--emit-dimacs", co.dimacs, "Write the CNF in DIMACS format to this file");
  add_random(co_cmd, co.c);
  add_output(co_cmd, co.c);

  SelfcheckArgs sf;
  auto* sf_cmd = app.add_subcommand("selfcheck", "Run the invariant suite and print a pass/fail table");
  sf_cmd->add_flag("--fast", sf.fast, "Reduced suite");
  sf_cmd->add_option("--mutate", sf.mutate, "Negative control: corrupt a component")->check(CLI::IsMember({"wtdist"}));
  add_random(sf_cmd, sf.c);
  add_output(sf_cmd, sf.c);

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << " (see rslab --help)\n";
    return kExitUsage;
  }

  const Io io{out, err};
  try {
    if (*wt_cmd) return cmd_wtdist(wt, io);
    if (*du_cmd) return cmd_dual(du, io);
    if (*rc_cmd) return cmd_recover(rc, io);
    if (*ag_cmd) return cmd_agree(ag, io);
    if (*pr_cmd) return cmd_predict(pr, io);
    if (*fo_cmd) return cmd_fourier(fo, io);
    if (*sc_cmd) return cmd_scan(sc, io);
    if (*ae_cmd) return cmd_agree_exp(ae, io);
    if (*co_cmd) return cmd_coin(co, io);
    if (*sf_cmd) return cmd_selfcheck(sf, io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace rslab::cli
