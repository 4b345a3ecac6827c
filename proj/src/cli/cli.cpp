/*
 Copyright 2026 The hovi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "hovi/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>

#include "hovi/adjoint.hpp"
#include "hovi/checks.hpp"
#include "hovi/error.hpp"
#include "hovi/hager.hpp"
#include "hovi/kkt.hpp"
#include "hovi/models.hpp"
#include "hovi/order_study.hpp"
#include "hovi/parallel.hpp"

namespace hovi::cli {
namespace {

using Json = nlohmann::ordered_json;
using Logger = std::shared_ptr<spdlog::logger>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  Table table;
  Json summary;
  int code = kOk;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json jnum(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Exec exec_of(const ExperimentConfig& c) { return c.jobs > 1 ? Exec::Parallel : Exec::Serial; }

Json schema(const std::string& sub) {
  return Json{{"schema", "hovic." + sub + "/1"}, {"version", kVersion}};
}

Vec vector_or(const std::string& text, const Vec& fallback) {
  if (text.empty()) return fallback;
  const std::vector<double> v = parse_double_list(text);
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double slope_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0 && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  return xs.size() >= 2 ? fit_slope(xs, ys) : std::nan("");
}

// --- subcommands -----------------------------------------------------------

Outcome cmd_coefficients(const ExperimentConfig& c, const Logger& log) {
  std::vector<Family> families;
  if (c.family == "all") {
    families = {Family::GaussLegendre, Family::GaussLobatto, Family::Radau, Family::Chebyshev};
  } else {
    families = {parse_family(c.family)};
  }
  const std::vector<int> stages = parse_int_list(c.N_list);

  Outcome o;
  o.table.header = {"family", "s", "table", "i", "j", "value"};
  CoefficientIdentities worst;
  Json rules = Json::array();
  for (Family f : families) {
    for (int s : stages) {
      if (s < min_stages(f)) continue;
      log->debug("coefficients {} s={}", family_name(f), s);
      const CollocationScheme sc = make_scheme(f, s);
      const CoefficientIdentities id = coefficient_identities(sc);
      const std::string fam(family_name(f));
      auto put_vec = [&](const std::string& name, const Vec& v) {
        for (int i = 0; i < v.size(); ++i) {
          o.table.rows.push_back({fam, std::to_string(s), name, std::to_string(i), "", num(v[i])});
        }
      };
      auto put_mat = [&](const std::string& name, const Mat& m) {
        for (int i = 0; i < m.rows(); ++i) {
          for (int j = 0; j < m.cols(); ++j) {
            o.table.rows.push_back(
                {fam, std::to_string(s), name, std::to_string(i), std::to_string(j), num(m(i, j))});
          }
        }
      };
      put_vec("c", sc.c);
      put_vec("b", sc.b);
      if (c.scheme != "sg") {
        const SprkCoefficients rk = sprk_coefficients(sc);
        put_mat("sprk_a", rk.a);
        put_mat("sprk_abar", rk.a_bar);
      }
      if (c.scheme != "sprk" && id.sg_defined) {
        const SgCoefficients sg = sg_coefficients(sc);
        put_mat("sg_a", sg.a);
        put_mat("sg_abar", sg.a_bar);
        put_vec("sg_alpha", sg.alpha);
        put_vec("sg_beta", sg.beta);
      }

      worst.weight_sum = std::max(worst.weight_sum, id.weight_sum);
      worst.sprk_conjugacy = std::max(worst.sprk_conjugacy, id.sprk_conjugacy);
      worst.sg_conjugacy = std::max(worst.sg_conjugacy, id.sg_conjugacy);
      worst.alpha_sum = std::max(worst.alpha_sum, id.alpha_sum);
      worst.beta_sum = std::max(worst.beta_sum, id.beta_sum);
      rules.push_back(Json{{"family", fam},
                           {"s", s},
                           {"sg_defined", id.sg_defined},
                           {"weight_sum", jnum(id.weight_sum)},
                           {"sprk_conjugacy", jnum(id.sprk_conjugacy)},
                           {"sg_conjugacy", jnum(id.sg_conjugacy)},
                           {"alpha_sum", jnum(id.alpha_sum)},
                           {"beta_sum", jnum(id.beta_sum)}});
    }
  }
  const bool pass = worst.weight_sum <= 1e-13 && worst.sprk_conjugacy <= 1e-12 &&
                    worst.sg_conjugacy <= 1e-12 && worst.alpha_sum <= 1e-13 &&
                    worst.beta_sum <= 1e-13;
  o.summary = schema("coefficients");
  o.summary["config"] = {{"family", c.family}, {"stages", c.N_list}, {"kind", c.scheme}};
  o.summary["rules"] = rules;
  o.summary["max_weight_sum"] = jnum(worst.weight_sum);
  o.summary["max_sprk_conjugacy"] = jnum(worst.sprk_conjugacy);
  o.summary["max_sg_conjugacy"] = jnum(worst.sg_conjugacy);
  o.summary["max_alpha_sum"] = jnum(worst.alpha_sum);
  o.summary["max_beta_sum"] = jnum(worst.beta_sum);
  o.summary["pass"] = pass;
  o.code = pass ? kOk : kCheckFailed;
  return o;
}

Outcome cmd_order_study(const ExperimentConfig& c, const Logger& log) {
  StepperConfig cfg;
  cfg.kind = parse_scheme_kind(c.scheme);
  cfg.scheme = make_scheme(parse_family(c.family), c.stages);
  const std::vector<double> h = parse_double_list(c.h_list);
  log->info("order study: {} {} {} s={} over {} step sizes", c.model, c.scheme, c.family,
            c.stages, h.size());
  const OrderStudy st = measure_order(order_problem(c.model, c.T), cfg, h, exec_of(c));

  Outcome o;
  o.table.header = {"h", "N", "error"};
  for (size_t i = 0; i < st.h.size(); ++i) {
    o.table.rows.push_back(
        {num(st.h[i]), std::to_string(std::lround(c.T / st.h[i])), num(st.error[i])});
  }
  o.summary = schema("order-study");
  o.summary["config"] = {{"model", c.model},   {"scheme", c.scheme}, {"family", c.family},
                         {"stages", c.stages}, {"T", c.T},           {"h_list", c.h_list}};
  o.summary["slope"] = jnum(st.slope);
  o.summary["min_error"] = jnum(*std::min_element(st.error.begin(), st.error.end()));
  return o;
}

Outcome cmd_verlet_check(const ExperimentConfig& c, const Logger& log) {
  log->info("verlet check: {} samples, seed {}", c.samples, c.seed);
  const VerletReport rep = verlet_check(c.samples, c.seed, 0.1, exec_of(c));
  Outcome o;
  o.table.header = {"sample", "q0", "p0", "sg_dev", "sprk_dev"};
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const VerletSample& s = rep.samples[i];
    o.table.rows.push_back(
        {std::to_string(i), num(s.q0), num(s.p0), num(s.sg_dev), num(s.sprk_dev)});
  }
  const bool pass = rep.max_dev <= 1e-10;
  o.summary = schema("verlet-check");
  o.summary["config"] = {{"samples", c.samples}, {"seed", c.seed}, {"h", 0.1}};
  o.summary["max_dev"] = jnum(rep.max_dev);
  o.summary["pass"] = pass;
  o.code = pass ? kOk : kCheckFailed;
  return o;
}

Outcome cmd_hager_experiment(const ExperimentConfig& c, const Logger& log) {
  const HagerVariant v = parse_hager_variant(c.variant);
  const std::vector<int> Ns = parse_int_list(c.N_list);
  for (size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1 || (i > 0 && Ns[i] <= Ns[i - 1])) {
      throw Error(ErrorKind::UsageError, "N-list must be positive and strictly increasing");
    }
  }
  log->info("hager experiment: variant {} (coercive: {})", v.id, v.coercive());
  KktOptions opt;
  const std::vector<HagerCase> cases = run_hager_experiment(v, c.T, Ns, opt, exec_of(c));

  Outcome o;
  o.table.header = {"N",       "q_error",    "p_error",  "u_error", "max_abs_control",
                    "status",  "iterations", "residual"};
  Json rows = Json::array();
  std::vector<double> h, qe, ue;
  bool expected_failure = false, failed = false;
  for (const HagerCase& hc : cases) {
    const bool ok = hc.status == CaseStatus::Ok || hc.status == CaseStatus::Diverged;
    const std::string status(to_string(hc.status));
    o.table.rows.push_back({std::to_string(hc.N), ok ? num(hc.q_error) : "nan",
                            ok ? num(hc.p_error) : "nan", ok ? num(hc.u_error) : "nan",
                            ok ? num(hc.max_abs_control) : "nan", status,
                            std::to_string(hc.iterations), num(hc.residual)});
    rows.push_back(Json{{"N", hc.N},
                        {"status", status},
                        {"q_error", ok ? jnum(hc.q_error) : Json(nullptr)},
                        {"u_error", ok ? jnum(hc.u_error) : Json(nullptr)},
                        {"max_abs_control", ok ? jnum(hc.max_abs_control) : Json(nullptr)},
                        {"message", hc.message}});
    if (hc.status == CaseStatus::Singular || hc.status == CaseStatus::Diverged) {
      expected_failure = true;
    }
    if (hc.status == CaseStatus::Failed) failed = true;
    if (hc.status == CaseStatus::Ok) {
      h.push_back(c.T / hc.N);
      qe.push_back(hc.q_error);
      ue.push_back(hc.u_error);
    }
    log->debug("N={} status={} {}", hc.N, status, hc.message);
  }
  o.summary = schema("hager-experiment");
  o.summary["config"] = {{"variant", v.id}, {"T", c.T}, {"N_list", c.N_list}};
  o.summary["coercive"] = v.coercive();
  o.summary["cases"] = rows;
  o.summary["q_slope"] = jnum(slope_or_nan(h, qe));
  o.summary["u_slope"] = jnum(slope_or_nan(h, ue));
  o.summary["outcome"] = failed ? "failed" : expected_failure ? "singular-or-diverged" : "solved";
  o.code = failed ? kUsage : expected_failure ? kExpectedFailure : kOk;
  return o;
}

OcpDefinition ocp_from_config(const ExperimentConfig& c) {
  const SchemeKind kind = parse_scheme_kind(c.scheme);
  const Family family = parse_family(c.family);
  if (c.model == "hager" && !c.variant.empty()) {
    return hager_problem(parse_hager_variant(c.variant), c.T, c.N, kind, family, c.stages);
  }
  const OrderProblem base = order_problem(c.model, c.T);
  OcpDefinition def;
  def.system = base.system;
  const int n = def.system->dim_q();
  QuadraticCost::Weights w{c.wq, c.wp, c.wu, c.kq, c.kp};
  def.cost = std::make_shared<QuadraticCost>(n, def.system->dim_u(), w);
  def.q_init = vector_or(c.q0, base.q0);
  def.p_init = vector_or(c.p0, base.p0);
  if (def.q_init.size() != n || def.p_init.size() != n) {
    throw Error(ErrorKind::UsageError, "q0 and p0 need " + std::to_string(n) + " entries");
  }
  def.T = c.T;
  def.N = c.N;
  def.kind = kind;
  def.scheme = make_scheme(family, c.stages);
  def.r = c.r;
  def.t = c.t;
  return def;
}

Outcome cmd_solve_ocp(const ExperimentConfig& c, const Logger& log) {
  const Transcription nlp(ocp_from_config(c));
  const OcpDefinition& def = nlp.definition();
  const int n = def.system->dim_q(), m = def.system->dim_u();
  KktOptions opt;
  opt.init = c.init == "zeros" ? InitStrategy::Zeros : InitStrategy::ForwardSim;
  if (c.init != "zeros" && c.init != "forward") {
    throw Error(ErrorKind::UsageError, "init must be forward or zeros");
  }
  opt.exec = exec_of(c);

  Outcome o;
  o.table.header = {"row", "k", "i", "t"};
  for (const char* name : {"q", "p", "u", "lambda"}) {
    const int dim = std::string(name) == "u" ? m : n;
    for (int j = 0; j < dim; ++j) o.table.header.push_back(name + std::to_string(j));
  }
  o.summary = schema("solve-ocp");
  o.summary["config"] = {{"model", c.model}, {"scheme", c.scheme}, {"family", c.family},
                         {"stages", c.stages}, {"N", c.N},       {"T", c.T},
                         {"r", def.control_nodes()}, {"t", def.cost_points()},
                         {"variant", def.variant}};
  log->info("solve-ocp: {} variables, {} constraints", nlp.layout().num_vars,
            nlp.layout().num_cons);
  KktSolution sol;
  try {
    sol = solve_kkt(nlp, opt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularKkt) throw;
    o.summary["status"] = "singular";
    o.summary["message"] = e.what();
    o.code = kExpectedFailure;
    return o;
  }
  const DiscreteTrajectory& tr = sol.trajectory;
  auto cells = [](std::vector<std::string>& row, const Vec& v, int dim) {
    for (int j = 0; j < dim; ++j) row.push_back(v.size() ? num(v[j]) : "");
  };
  for (int k = 0; k <= tr.N; ++k) {
    std::vector<std::string> row{"node", std::to_string(k), "", num(tr.t[k])};
    cells(row, tr.q[k], n);
    cells(row, tr.p[k], n);
    cells(row, Vec(), m);
    cells(row, sol.lambda[k], n);
    o.table.rows.push_back(std::move(row));
    if (k == tr.N) break;
    const StageBlock& st = tr.stages[k];
    for (int i = 0; i < def.scheme.s; ++i) {
      std::vector<std::string> srow{"stage", std::to_string(k), std::to_string(i),
                                    num(tr.t[k] + def.scheme.c[i] * tr.h)};
      cells(srow, st.Q.row(i).transpose(), n);
      cells(srow, st.P.row(i).transpose(), n);
      cells(srow, st.U.row(i).transpose(), m);
      cells(srow, Vec(), n);
      o.table.rows.push_back(std::move(srow));
    }
  }
  o.summary["status"] = sol.diverged ? "diverged" : "ok";
  o.summary["cost"] = jnum(nlp.cost(sol.x));
  o.summary["iterations"] = sol.iterations;
  o.summary["residual"] = jnum(sol.residual);
  o.summary["rcond"] = jnum(sol.rcond);
  o.summary["max_abs_control"] = jnum(sol.max_abs_control);
  o.code = sol.diverged ? kExpectedFailure : kOk;
  return o;
}

Outcome cmd_commutation_check(const ExperimentConfig& c, const Logger& log) {
  const std::vector<int> Ns = parse_int_list(c.N_list);
  const HagerVariant v = parse_hager_variant(c.variant);
  std::vector<CommutationReport> reps(Ns.size());
  KktOptions kopt;
  BvpOptions bopt;
  const SchemeKind kind = parse_scheme_kind(c.scheme);
  const Family family = parse_family(c.family);
  for_each_index(
      static_cast<int>(Ns.size()),
      [&](int i) {
        reps[i] = commutation_check(hager_problem(v, c.T, Ns[i], kind, family, c.stages), kopt,
                                    bopt);
      },
      exec_of(c));

  Outcome o;
  o.table.header = {"N",          "adjoint_residual",   "matching_residual", "primal_deviation",
                    "dual_deviation", "feedback_deviation", "round_trip",      "gate",
                    "pass"};
  bool pass = true;
  double worst_round_trip = 0.0;
  for (const CommutationReport& r : reps) {
    o.table.rows.push_back({std::to_string(r.N), num(r.adjoint_residual), num(r.matching_residual),
                            num(r.primal_deviation), num(r.dual_deviation),
                            num(r.feedback_deviation), num(r.round_trip), num(r.gate),
                            r.pass ? "true" : "false"});
    pass = pass && r.pass;
    worst_round_trip = std::max(worst_round_trip, r.round_trip);
    log->debug("N={} adjoint residual {:.3e} deviation {:.3e}", r.N, r.adjoint_residual,
               r.max_deviation);
  }
  o.summary = schema("commutation-check");
  o.summary["config"] = {{"variant", v.id}, {"T", c.T}, {"N_list", c.N_list},
                         {"scheme", c.scheme}, {"family", c.family}, {"stages", c.stages}};
  o.summary["max_round_trip"] = jnum(worst_round_trip);
  o.summary["pass"] = pass;
  o.code = pass ? kOk : kCheckFailed;
  return o;
}

// --- plumbing --------------------------------------------------------------

Logger make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("hovic", sink);
  log->set_pattern("[hovic %l] %v");
  const char* env = std::getenv("HOVIC_LOG");
  const std::string level = env ? env : "quiet";
  if (level == "quiet") {
    log->set_level(spdlog::level::off);
  } else if (level == "info") {
    log->set_level(spdlog::level::info);
  } else if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    throw Error(ErrorKind::UsageError, "HOVIC_LOG must be quiet, info or debug");
  }
  return log;
}

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

std::string json_path(const std::string& csv) {
  const std::string ext = ".csv";
  if (csv.size() > ext.size() && csv.compare(csv.size() - ext.size(), ext.size(), ext) == 0) {
    return csv.substr(0, csv.size() - ext.size()) + ".json";
  }
  return csv + ".json";
}

void emit(const Outcome& o, const ExperimentConfig& c, std::ostream& out) {
  if (c.out.empty()) {
    write_csv(out, o.table);
    out << o.summary.dump() << '\n';
    return;
  }
  std::ofstream csv(c.out);
  std::ofstream json(json_path(c.out));
  if (!csv || !json) throw Error(ErrorKind::UsageError, "cannot write " + c.out);
  write_csv(csv, o.table);
  json << o.summary.dump(2) << '\n';
}

void add_common(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--out", c.out, "CSV path; the JSON summary goes next to it (.json)");
  sub->add_option("--config", c.config, "key=value file; command-line flags override it");
  sub->add_option("--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed for random sample points");
  sub->add_flag("--timing", c.timing, "add wall_time_s to the JSON summary");
}

void add_scheme(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--scheme", c.scheme, "sg or sprk")->capture_default_str();
  sub->add_option("--family", c.family, "gauss, lobatto, radau or chebyshev")
      ->capture_default_str();
  sub->add_option("--stages,-s", c.stages, "stage count s")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational integrators and discrete optimal control experiments", "hovic"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.footer(
      "Exit codes: 0 success, 1 usage or internal error, 2 SingularKkt or divergence,\n"
      "3 a gated check failed. HOVIC_LOG=quiet|info|debug sets stderr diagnostics.\n"
      "Every subcommand writes CSV (schema in its --help) and a one-object JSON summary.");

  std::map<std::string, ExperimentConfig> cfg;
  std::map<std::string, std::function<Outcome(const ExperimentConfig&, const Logger&)>> handler;

  {
    ExperimentConfig& c = cfg["coefficients"];
    c.family = "all";
    c.scheme = "both";
    c.N_list = "1,2,3,4,5,6,7,8";
    CLI::App* sub = app.add_subcommand("coefficients", "coefficient tables and their identities");
    sub->add_option("--family", c.family, "one family or all")->capture_default_str();
    sub->add_option("--stages", c.N_list, "comma-separated stage counts")->capture_default_str();
    sub->add_option("--kind", c.scheme, "sprk, sg or both")
        ->check(CLI::IsMember({"sprk", "sg", "both"}))
        ->capture_default_str();
    add_common(sub, c);
    sub->footer("CSV schema hovic.coefficients/1: family,s,table,i,j,value\n"
                "  table in {c,b,sprk_a,sprk_abar,sg_a,sg_abar,sg_alpha,sg_beta}; j empty for vectors\n"
                "  sG tables are omitted for a single node (first and last node coincide)");
    handler["coefficients"] = cmd_coefficients;
  }
  {
    ExperimentConfig& c = cfg["order-study"];
    c.scheme = "sprk";
    c.family = "gauss";
    c.stages = 2;
    c.T = 2.0;
    CLI::App* sub = app.add_subcommand("order-study", "global error slope over a step-size list");
    sub->add_option("--model", c.model, "harmonic, kepler, hager or scalarmass")
        ->capture_default_str();
    add_scheme(sub, c);
    sub->add_option("--T", c.T, "final time")->capture_default_str();
    sub->add_option("--h-list", c.h_list, "geometric step sizes with T/h integral")
        ->capture_default_str();
    add_common(sub, c);
    sub->footer("CSV schema hovic.order-study/1: h,N,error");
    handler["order-study"] = cmd_order_study;
  }
  {
    ExperimentConfig& c = cfg["verlet-check"];
    CLI::App* sub =
        app.add_subcommand("verlet-check", "Lobatto s=2 steps against the leap-frog update");
    sub->add_option("--samples", c.samples, "random initial states")->capture_default_str();
    add_common(sub, c);
    sub->footer("CSV schema hovic.verlet-check/1: sample,q0,p0,sg_dev,sprk_dev");
    handler["verlet-check"] = cmd_verlet_check;
  }
  {
    ExperimentConfig& c = cfg["hager-experiment"];
    CLI::App* sub =
        app.add_subcommand("hager-experiment", "cost discretization variants on the LQ example");
    sub->add_option("--variant", c.variant, "c<r>t<t>, r in {2,3}, t in {1..4}")
        ->capture_default_str();
    sub->add_option("--N-list", c.N_list, "strictly increasing step counts")
        ->capture_default_str();
    sub->add_option("--T", c.T, "final time")->capture_default_str();
    add_common(sub, c);
    sub->footer(
        "CSV schema hovic.hager-experiment/1: "
        "N,q_error,p_error,u_error,max_abs_control,status,iterations,residual\n"
        "  status in {ok,singular,diverged,failed}; exit 2 when any case is singular or diverged");
    handler["hager-experiment"] = cmd_hager_experiment;
  }
  {
    ExperimentConfig& c = cfg["solve-ocp"];
    c.model = "hager";
    CLI::App* sub = app.add_subcommand("solve-ocp", "solve one discrete optimal control problem");
    sub->add_option("--model", c.model, "harmonic, kepler, hager or scalarmass")
        ->capture_default_str();
    add_scheme(sub, c);
    sub->add_option("--N", c.N, "steps")->capture_default_str();
    sub->add_option("--T", c.T, "final time")->capture_default_str();
    sub->add_option("--variant", c.variant, "hager model only; empty for the generic cost")
        ->capture_default_str();
    sub->add_option("--r", c.r, "control nodes per step (0: s)");
    sub->add_option("--t", c.t, "cost points per step (0: s)");
    sub->add_option("--q0", c.q0, "initial position, comma-separated");
    sub->add_option("--p0", c.p0, "initial momentum, comma-separated");
    sub->add_option("--wq", c.wq, "running weight on |q|^2");
    sub->add_option("--wp", c.wp, "running weight on |p|^2");
    sub->add_option("--wu", c.wu, "running weight on |u|^2");
    sub->add_option("--kq", c.kq, "terminal weight on |q|^2/2");
    sub->add_option("--kp", c.kp, "terminal weight on |p|^2/2");
    sub->add_option("--init", c.init, "forward or zeros")->capture_default_str();
    add_common(sub, c);
    sub->footer(
        "CSV schema hovic.solve-ocp/1: row,k,i,t,q*,p*,u*,lambda*\n"
        "  row=node carries q_k,p_k,lambda_k; row=stage carries Q_i,P_i,U_i of step k");
    handler["solve-ocp"] = cmd_solve_ocp;
  }
  {
    ExperimentConfig& c = cfg["commutation-check"];
    c.N_list = "8,16,32";
    CLI::App* sub = app.add_subcommand(
        "commutation-check", "transformed KKT multipliers against the state-adjoint solve");
    sub->add_option("--variant", c.variant, "must have r = t = s")->capture_default_str();
    add_scheme(sub, c);
    sub->add_option("--N-list", c.N_list, "step counts")->capture_default_str();
    sub->add_option("--T", c.T, "final time")->capture_default_str();
    add_common(sub, c);
    sub->footer(
        "CSV schema hovic.commutation-check/1: N,adjoint_residual,matching_residual,"
        "primal_deviation,dual_deviation,feedback_deviation,round_trip,gate,pass\n"
        "  exit 3 when any N fails");
    handler["commutation-check"] = cmd_commutation_check;
  }

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    err << "hovic: " << e.what() << '\n';
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentConfig& c = cfg[name];
  c.subcommand = name;
  try {
    const Logger log = make_logger(err);
    set_parallel_jobs(c.jobs);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = handler[name](c, log);
    if (c.timing) {
      o.summary["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    emit(o, c, out);
    return o.code;
  } catch (const Error& e) {
    err << "hovic " << name << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::SingularKkt ? kExpectedFailure : kUsage;
  } catch (const std::exception& e) {
    err << "hovic " << name << ": internal error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace hovi::cli
