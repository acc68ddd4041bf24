#include "dcl/cli/commands.hpp"

#include "dcl/bourgain.hpp"
#include "dcl/cli/config.hpp"
#include "dcl/embeddings.hpp"
#include "dcl/error.hpp"
#include "dcl/illposed.hpp"
#include "dcl/io.hpp"
#include "dcl/picard.hpp"
#include "dcl/rescale.hpp"
#include "dcl/resonance.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dcl::cli {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.output_dir) / name).string();
}

void prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + c.output_dir + "': " + ec.message());
}

SpatialSpectrum cosine(const ModelParams& p, double amplitude, int mode) {
  require(mode >= 1 && mode <= p.modes, "initial mode must satisfy 1 <= mode <= K lambda");
  // F_x[A cos(n x / lambda)](+-n / lambda) = A lambda sqrt(pi / 2)
  SpatialSpectrum u(p);
  const double a = amplitude * p.lambda * std::sqrt(std::numbers::pi / 2.0);
  u.at(mode) = a;
  u.at(-mode) = a;
  return u;
}

SpatialSpectrum initial_data(const RunConfig& c, const ModelParams& p) {
  if (!c.initial_spectrum.empty()) {
    const json doc = json::parse(read_text(c.initial_spectrum));
    SpatialSpectrum u = spectrum_from_json(doc, p);
    require(u.params().j == p.j && u.params().lambda == p.lambda,
            "initial spectrum's j / lambda differ from the configuration");
    return u;
  }
  return cosine(p, c.amplitude, c.mode);
}

Equation equation(const RunConfig& c) { return {true, !c.kdv, 1.0}; }

double relative_change(double a, double b) { return a != 0.0 ? std::abs(b - a) / std::abs(a) : std::abs(b - a); }

json params_json(const ModelParams& p) {
  return {{"j", p.j}, {"lambda", p.lambda}, {"epsilon", p.epsilon}, {"kmax", p.kmax()},
          {"modes", p.modes}, {"dealias", p.dealias}};
}

// ---------------------------------------------------------------------------

int cmd_simulate(RunConfig c, std::ostream& out) {
  const ModelParams p = c.params();
  c.kmax = p.kmax();
  const SpatialSpectrum u0 = initial_data(c, p);
  SimulateConfig sc;
  sc.eq = equation(c);
  sc.stride = c.stride;
  sc.diag_s = c.s;
  const Trajectory tr = simulate(u0, 0.0, c.T, c.dt, sc);

  prepare_output(c);
  std::ostringstream csv;
  write_trajectory_csv(csv, tr.diagnostics);
  write_text(out_path(c, "trajectory.csv"), csv.str());
  const SolverState& last = tr.states.back();
  write_text(out_path(c, "final_spectrum.json"), spectrum_to_json(last.spec).dump(2) + "\n");
  std::ostringstream field;
  write_field_csv(field, inverse_transform(last.spec, 0, 0.0));
  write_text(out_path(c, "final_field.csv"), field.str());

  const Diagnostics& d0 = tr.diagnostics.front();
  const Diagnostics& d1 = tr.diagnostics.back();
  json rep;
  rep["command"] = "simulate";
  rep["config"] = to_json(c);
  rep["params"] = params_json(p);
  rep["equation"] = c.kdv ? "kdv" : "nonlocal";
  rep["status"] = to_string(tr.status);
  rep["message"] = tr.message;
  rep["t_final"] = d1.t;
  rep["dt_effective"] = tr.dt;
  rep["records"] = tr.states.size();
  rep["phase_per_step"] = tr.phase_per_step;
  rep["energy_drift"] = relative_change(d0.energy, d1.energy);
  rep["l2_drift"] = relative_change(d0.l2, d1.l2);
  rep["mean_change"] = std::abs(d1.mean - d0.mean);
  rep["outputs"] = {"trajectory.csv", "final_spectrum.json", "final_field.csv"};
  write_text(out_path(c, "simulate_report.json"), rep.dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return tr.status == RunStatus::Completed ? kOk : kFailure;
}

int verify_resonance_cmd(RunConfig c, std::ostream& out) {
  const double K = c.kmax.value_or(64.0);
  require(K >= 2.0 && K == std::floor(K) && K < 1e9, "resonance Kmax must be an integer >= 2");
  c.kmax = K;
  const std::uint64_t seed = c.seed.value_or(1);
  const ResonanceCertificate cert = verify_resonance(static_cast<std::int64_t>(K), c.j, seed);
  const bool pass = cert.violations == 0 && cert.identity_failures == 0 && cert.max_case_failures == 0;
  json rep;
  rep["j"] = cert.j;
  rep["Kmax"] = cert.kmax;
  rep["triples_checked"] = cert.triples_checked;
  rep["violations"] = cert.violations;
  rep["min_slack"] = cert.min_slack;
  rep["argmin"] = {cert.argmin.k, cert.argmin.k1, cert.argmin.k2};
  rep["identity_checks"] = cert.identity_checks;
  rep["identity_failures"] = cert.identity_failures;
  rep["max_case_failures"] = cert.max_case_failures;
  rep["max_case_counts"] = {{"a", cert.case_counts[0]}, {"b", cert.case_counts[1]}, {"c", cert.case_counts[2]}};
  rep["tau_seed"] = seed;
  rep["pass"] = pass;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "resonance_certificate.json"), rep.dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return pass ? kOk : kFailure;
}

int verify_embeddings_cmd(RunConfig c, std::ostream& out) {
  require(c.scan_bound >= 4.0 && c.scan_bound == std::floor(c.scan_bound),
          "scan_bound must be an integer >= 4");
  const ModelParams p = c.params();
  const int B = static_cast<int>(c.scan_bound);
  EmbeddingScan scan;
  scan.bounds = {B / 4, B / 2, B};
  scan.force = c.force_window;
  const EmbeddingReport r = verify_embeddings(c.s, p, scan);

  json pj = {{"j", r.j}, {"s", r.s}, {"epsilon", r.epsilon}, {"lambda", p.lambda}};
  json entries = json::array();
  std::ostringstream csv;
  csv << "k,sigma,region,ratio\n";
  for (const auto& chk : r.checks) {
    const auto& top = chk.trend.back();
    json trend = json::array();
    for (const auto& t : chk.trend) {
      trend.push_back({{"bound", t.bound}, {"max_ratio", t.max_ratio}});
      csv << format_number(t.argmax_k) << ',' << format_number(t.argmax_sigma) << ',' << chk.regions << ','
          << format_number(t.max_ratio) << '\n';
    }
    entries.push_back({{"lemma", "embedding chain: " + chk.name},
                       {"regions", chk.regions},
                       {"params", pj},
                       {"max_ratio", top.max_ratio},
                       {"argmax", {{"k", top.argmax_k}, {"sigma", top.argmax_sigma}}},
                       {"trend", trend},
                       {"growth_per_doubling", chk.growth},
                       {"pass", chk.pass}});
  }
  json rep;
  rep["target"] = "embeddings";
  rep["window"] = {{"lo", r.window.lo}, {"hi", r.window.hi}, {"contains_s", r.in_window}};
  rep["checks"] = entries;
  rep["pass"] = r.pass;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "embeddings_report.json"), rep.dump(2) + "\n");
  write_text(out_path(c, "embeddings_scan.csv"), csv.str());
  out << rep.dump(2) << "\n";
  return r.pass ? kOk : kFailure;
}

int verify_regions_cmd(RunConfig c, std::ostream& out) {
  const ModelParams p = c.params();
  c.kmax = p.kmax();
  const double dtau = c.tau_step.value_or(0.25);
  c.tau_step = dtau;
  const PartitionReport r = verify_partition(p, dtau, c.sigma_bound);
  json rep;
  rep["target"] = "regions";
  rep["points"] = r.points;
  rep["uncovered"] = r.uncovered;
  rep["overlaps"] = r.overlaps;
  rep["tie_points_at_unit_k"] = r.tie_points;
  rep["per_region"] = {{"D1", r.per_region[0]}, {"D2", r.per_region[1]}, {"D3", r.per_region[2]},
                       {"D4", r.per_region[3]}, {"D5", r.per_region[4]}};
  rep["pass"] = r.pass;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "regions_report.json"), rep.dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return r.pass ? kOk : kFailure;
}

int cmd_verify(RunConfig c, std::ostream& out) {
  if (c.target == "resonance") return verify_resonance_cmd(c, out);
  if (c.target == "embeddings") return verify_embeddings_cmd(c, out);
  if (c.target == "regions") return verify_regions_cmd(c, out);
  throw ValidationError("verify needs --target resonance, embeddings or regions");
}

int cmd_illposed(RunConfig c, std::ostream& out) {
  require(!c.N_list.empty(), "illposed needs N_list (e.g. --N_list 16,32,64,128,256,512,1024)");
  const double dtau = c.tau_step.value_or(0.125);
  c.tau_step = dtau;
  CounterexampleConfig cc;
  cc.N_list = c.N_list;
  cc.j = c.j;
  cc.s = c.s;
  cc.dtau = dtau;
  const CollisionReport r = collision_scan(cc);

  std::ostringstream csv;
  csv << "N,L,R,logN,logL,logR\n";
  for (const auto& row : r.rows)
    csv << row.N << ',' << format_number(row.L) << ',' << format_number(row.R) << ','
        << format_number(std::log(static_cast<double>(row.N))) << ',' << format_number(std::log(row.L)) << ','
        << format_number(std::log(row.R)) << '\n';
  json rep;
  rep["j"] = c.j;
  rep["s"] = c.s;
  rep["slopeL"] = r.regression ? json(r.slopeL) : json(nullptr);
  rep["slopeR"] = r.regression ? json(r.slopeR) : json(nullptr);
  rep["critical_s"] = r.critical_s;
  rep["verdict"] = r.verdict;
  rep["config"] = to_json(c);

  std::ostringstream gp;
  gp << "# gnuplot script: log-log plot of the collision scan\n"
     << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'N'\n"
     << "set key top left\n"
     << "set title 'j = " << c.j << ", s = " << format_number(c.s) << ": " << r.verdict << "'\n"
     << "plot 'illposed.csv' every ::1 using 1:2 with linespoints title 'L(N)', \\\n"
     << "     'illposed.csv' every ::1 using 1:3 with linespoints title 'R(N)'\n";
  prepare_output(c);
  write_text(out_path(c, "illposed.csv"), csv.str());
  write_text(out_path(c, "verdict.json"), rep.dump(2) + "\n");
  write_text(out_path(c, "illposed.gp"), gp.str());
  out << rep.dump(2) << "\n";
  return kOk;
}

int cmd_probe(RunConfig c, std::ostream& out) {
  require(c.pairs >= 1, "probe needs pairs >= 1");
  require(c.seed.has_value(), "probe draws random data: pass --seed");
  require(c.probe_modes >= 1, "probe_modes must be >= 1");
  const double dtau = c.tau_step.value_or(0.25);
  c.tau_step = dtau;
  std::vector<BilinearForm> forms;
  if (c.form == "all")
    forms = {BilinearForm::DxDxSmoothed, BilinearForm::ProductDx, BilinearForm::ProductSmoothed};
  else
    forms = {parse_bilinear_form(c.form)};
  json list = json::array();
  for (BilinearForm f : forms) {
    ProbeBatchConfig pc;
    pc.j = c.j;
    pc.s = c.s;
    pc.epsilon = c.resolved_epsilon();
    pc.data_modes = c.probe_modes;
    pc.dtau = dtau;
    pc.pairs = c.pairs;
    pc.seed = *c.seed;
    pc.form = f;
    pc.force = c.force_window;
    const ProbeBatch b = bilinear_probe_batch(pc);
    list.push_back({{"form", to_string(f)},
                    {"pairs", c.pairs},
                    {"seed", *c.seed},
                    {"max_ratio", b.max_ratio},
                    {"median_ratio", b.median_ratio},
                    {"ratios", b.ratios}});
  }
  json rep;
  rep["command"] = "probe";
  rep["probes"] = list;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "probe_report.json"), rep.dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return kOk;
}

int cmd_rescale(RunConfig c, std::ostream& out) {
  ScalingTransform{c.mu}.validate();
  if (!c.kmax) c.kmax = 16.0 / c.lambda;
  const ModelParams p = c.params();
  const SpatialSpectrum u0 = initial_data(c, p);
  SimulateConfig sc;
  sc.eq = equation(c);
  sc.stride = c.stride;
  const Trajectory tr = simulate(u0, 0.0, c.T, c.dt, sc);
  if (tr.status != RunStatus::Completed) throw NumericalError("simulation failed: " + tr.message);
  const Trajectory scaled = rescale_trajectory(tr, c.mu);
  const ResidualReport rr = rescaled_residual(scaled, c.mu);
  const bool pass = rr.relative <= c.tolerance;
  json rep;
  rep["command"] = "rescale-check";
  rep["mu"] = c.mu;
  rep["lambda_rescaled"] = scaled.params.lambda;
  rep["time_factor"] = ScalingTransform{c.mu}.time_factor(p.j);
  rep["residual"] = rr.residual;
  rep["relative_residual"] = rr.relative;
  rep["differencing_error"] = rr.differencing_error;
  rep["differencing_order"] = rr.order;
  rep["tolerance"] = c.tolerance;
  rep["pass"] = pass;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "rescale_report.json"), rep.dump(2) + "\n");
  write_text(out_path(c, "rescaled_initial.json"), spectrum_to_json(scaled.states.front().spec).dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return pass ? kOk : kFailure;
}

int cmd_picard(RunConfig c, std::ostream& out) {
  if (!c.kmax) c.kmax = 16.0 / c.lambda;
  const ModelParams p = c.params();
  const SpatialSpectrum u0 = initial_data(c, p);
  PicardConfig pc;
  pc.iterations = c.iterations;
  pc.time_step = c.time_step;
  pc.s = c.s;
  pc.eq = equation(c);
  const PicardResult r = picard_iterate(u0, pc);

  SimulateConfig sc;
  sc.eq = pc.eq;
  const Trajectory tr = simulate(u0, 0.0, 0.5, c.dt, sc);
  const SpatialSpectrum& ws = tr.states.back().spec;
  const SpatialSpectrum& wp = r.final_at(0.5);
  const double nrm = hs_norm(ws, c.s);
  const double agree = nrm > 0.0 ? hs_norm(wp - ws, c.s) / nrm : hs_norm(wp - ws, c.s);

  json steps = json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"n", st.n}, {"sup_hs", st.sup_hs}, {"zs", st.zs},
                     {"ratio_hs", st.n >= 2 ? json(st.ratio_hs) : json(nullptr)},
                     {"ratio_zs", st.n >= 2 ? json(st.ratio_zs) : json(nullptr)}});
  json rep;
  rep["command"] = "picard";
  rep["steps"] = steps;
  rep["diverged"] = r.diverged;
  rep["grid_self_check"] = r.self_check_change;
  rep["dtau"] = r.dtau_used;
  rep["simulate_agreement_t0.5"] = agree;
  rep["config"] = to_json(c);
  prepare_output(c);
  write_text(out_path(c, "picard_report.json"), rep.dump(2) + "\n");
  write_text(out_path(c, "picard_final.json"), spectrum_to_json(wp).dump(2) + "\n");
  out << rep.dump(2) << "\n";
  return r.diverged ? kFailure : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral laboratory for a higher-order Camassa-Holm-type equation", "dcl"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  struct Sub {
    CLI::App* app;
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  const std::vector<std::pair<std::string, std::string>> names = {
      {"simulate", "integrate the equation and write a trajectory"},
      {"verify", "certificates: --target resonance | embeddings | regions"},
      {"illposed", "counterexample scaling scan"},
      {"probe", "random bilinear-estimate probes"},
      {"rescale-check", "residual of a rescaled trajectory in the rescaled equation"},
      {"picard", "Picard iteration of the truncated Duhamel map"},
  };
  std::vector<Sub> subs(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    Sub& s = subs[i];
    s.app = app.add_subcommand(names[i].first, names[i].second);
    s.app->add_option("--config", s.config, "JSON configuration file (flags override it)");
    for (const auto& key : config_keys()) {
      auto* opt = s.app->add_option(std::string("--") + key.name, s.values[key.name], key.help);
      if (key.type == KeyType::Bool) opt->expected(0, 1)->default_str("true");
      s.options[key.name] = opt;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    Sub& s = subs[i];
    if (!s.app->parsed()) continue;
    try {
      json doc = json::object();
      if (!s.config.empty()) {
        doc = json::parse(read_text(s.config));
        if (!doc.is_object()) throw ValidationError("configuration file must hold a JSON object");
      }
      for (const auto& key : config_keys()) {
        CLI::Option* opt = s.options[key.name];
        if (opt->count() == 0) continue;
        std::string text = s.values[key.name];
        if (key.type == KeyType::Bool && (text.empty())) text = "true";
        doc[key.name] = parse_flag_value(key.name, text);
      }
      const RunConfig cfg = from_json(doc);
      const std::string& name = names[i].first;
      if (name == "simulate") return cmd_simulate(cfg, out);
      if (name == "verify") return cmd_verify(cfg, out);
      if (name == "illposed") return cmd_illposed(cfg, out);
      if (name == "probe") return cmd_probe(cfg, out);
      if (name == "rescale-check") return cmd_rescale(cfg, out);
      if (name == "picard") return cmd_picard(cfg, out);
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << "\n";
      return kValidation;
    } catch (const json::exception& e) {
      err << "error: malformed JSON: " << e.what() << "\n";
      return kValidation;
    } catch (const NumericalError& e) {
      err << "numerical failure: " << e.what() << "\n";
      return kFailure;
    }
  }
  return kValidation;
}

}  // namespace dcl::cli
