#include "cli_app.hpp"

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metricforge.hpp"

namespace metricforge::cli {
namespace {

struct GenerateOpts {
  std::string kind;
  long side = 0;
  double spacing = 0.0;
  long n = 0;
  double radius = 1.0;
  double eps = 0.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
  bool mark_boundary = false;
  CLI::Option* mark_opt = nullptr;
  std::string output;
};

struct IoOpts {
  std::string input;
  std::string output;
  std::string basepoint;
};

struct CheckOpts {
  std::string input;
  std::string output;
  std::string suite;
  std::uint64_t seed = 0;
  double tol = kAxiomTolerance;
  std::optional<double> q;
  std::vector<double> radii;
  std::size_t radii_count = 8;
  std::size_t centers = 128;
  std::vector<std::string> center_labels;
  std::optional<double> eps;
  std::optional<double> max_k;
  std::optional<int> max_doubling;
  bool no_doubling = false;
  std::optional<double> delta;
  double lambda_max = 16.0;
  std::optional<double> max_lambda1;
  std::optional<double> max_lambda2;
  std::string target;
  std::string mode;
  std::string claim_theta;
  std::string claim_eta;
  bool two_sided = false;
  std::size_t samples = 1000000;
  std::size_t exhaustive_limit = 60;
  std::string csv;
};

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (to_stdout(path))
    out << text;
  else
    write_file(path, text);
}

void write_sidecar(const std::string& path, const RunManifest& m, double seconds) {
  if (to_stdout(path)) return;
  json j = to_json(m);
  j["duration_seconds"] = seconds;
  write_file(path + ".manifest.json", j.dump(2) + "\n");
}

void emit_space(const std::string& path, const FiniteMetricSpace& m, const RunManifest& man, std::ostream& out) {
  if (!to_stdout(path) && has_suffix(path, ".csv")) {
    write_file(path, to_csv(m));
    return;
  }
  json j = to_json(m);
  j["manifest"] = to_json(man);
  emit(path, j.dump(1) + "\n", out);
}

RunManifest manifest_for(const std::vector<std::string>& args) {
  RunManifest man;
  man.command = args.empty() ? "" : args.front();
  man.args = args;
  return man;
}

int cmd_generate(const GenerateOpts& o, RunManifest& man, std::ostream& out) {
  GeneratorSpec spec;
  const bool mark_given = o.mark_opt && o.mark_opt->count() > 0;
  auto& p = man.parameters;
  p["kind"] = o.kind;
  bool seeded = true;
  if (o.kind == "grid") {
    spec = EuclideanGrid{o.side, o.spacing};
    p["side"] = o.side;
    p["spacing"] = o.spacing;
    seeded = false;
  } else if (o.kind == "disk") {
    spec = DiskSample{o.n, o.radius, o.seed, o.mark_boundary};
    p["n"] = o.n;
    p["radius"] = o.radius;
    p["mark_boundary"] = o.mark_boundary;
  } else if (o.kind == "disk-grid") {
    const bool mark = mark_given ? o.mark_boundary : true;
    spec = DiskGrid{o.radius, o.spacing, mark};
    p["radius"] = o.radius;
    p["spacing"] = o.spacing;
    p["mark_boundary"] = mark;
    seeded = false;
  } else if (o.kind == "sphere-cap") {
    spec = SphereCapComplement{o.eps, o.n, o.seed};
    p["eps"] = o.eps;
    p["n"] = o.n;
  } else if (o.kind == "halfplane") {
    spec = HalfplaneSample{o.n, o.seed};
    p["n"] = o.n;
  } else if (o.kind == "random") {
    spec = RandomMetric{o.n, o.seed};
    p["n"] = o.n;
  } else if (o.kind == "circle") {
    spec = CircleSample{o.n, o.gap};
    p["n"] = o.n;
    p["gap_degrees"] = o.gap;
    seeded = false;
  } else {
    throw ParameterError("unknown kind '" + o.kind + "'");
  }
  if (seeded) man.seeds.push_back(o.seed);
  man.outputs.push_back(o.output);
  emit_space(o.output, generate(spec), man, out);
  return kPass;
}

int cmd_warp(const IoOpts& o, RunManifest& man, std::ostream& out) {
  const auto m = load_space(o.input);
  const auto p = m.index_of(o.basepoint);
  if (!p) throw ParameterError("no point labelled '" + o.basepoint + "'");
  man.parameters["basepoint"] = o.basepoint;
  man.inputs.push_back(o.input);
  man.outputs.push_back(o.output);
  emit_space(o.output, warp(m, *p).warped, man, out);
  return kPass;
}

int cmd_double(const IoOpts& o, RunManifest& man, std::ostream& out) {
  const auto m = load_space(o.input);
  man.inputs.push_back(o.input);
  man.outputs.push_back(o.output);
  const auto ds = double_space(m);
  man.parameters["alpha"] = ds.alpha ? num(*ds.alpha) : json(nullptr);
  emit_space(o.output, ds.doubled, man, out);
  return kPass;
}

std::vector<Index> resolve_centers(const FiniteMetricSpace& m, const CheckOpts& o) {
  if (o.center_labels.empty()) return sample_centers(m.size(), o.centers, o.seed);
  std::vector<Index> out;
  for (const auto& l : o.center_labels) {
    const auto i = m.index_of(l);
    if (!i) throw ParameterError("no point labelled '" + l + "'");
    out.push_back(*i);
  }
  return out;
}

int cmd_check(const CheckOpts& o, RunManifest& man, std::ostream& out) {
  const auto m = load_space(o.input);
  man.inputs.push_back(o.input);
  auto& p = man.parameters;
  p["suite"] = o.suite;
  if (!o.csv.empty() && o.suite != "distortion") throw ParameterError("--csv applies to the distortion suite only");

  json result;
  int code = kPass;
  if (o.suite == "metric") {
    p["tol"] = o.tol;
    const auto rep = validate_metric(m, o.tol);
    result = to_json(rep, m);
    code = rep.ok() ? kPass : kThresholdFailure;
  } else if (o.suite == "regularity") {
    if (!o.q) throw ParameterError("--q is required for the regularity suite");
    const double delta = o.delta.value_or(default_delta(m));
    const auto radii = o.radii.empty() ? default_radii(m, delta, o.radii_count) : o.radii;
    const auto centers = resolve_centers(m, o);
    man.seeds.push_back(o.seed);
    p["q"] = *o.q;
    p["eps"] = o.eps ? json(*o.eps) : json(nullptr);
    p["max_k"] = o.max_k ? json(*o.max_k) : json(nullptr);
    p["max_doubling"] = o.max_doubling ? json(*o.max_doubling) : json(nullptr);
    RegularityOptions ro;
    ro.eps = o.eps;
    ro.with_doubling = !o.no_doubling;
    const auto rep = regularity_constant(m, *o.q, radii, centers, ro);
    result = to_json(rep, m);
    if (rep.radii.empty() || rep.centers.empty())
      code = kUnusable;
    else if ((o.max_k && !(rep.K_hat <= *o.max_k)) ||
             (o.max_doubling && rep.doubling_evaluated && rep.M_hat > *o.max_doubling))
      code = kThresholdFailure;
  } else if (o.suite == "llc") {
    const double delta = o.delta.value_or(default_delta(m));
    const auto radii = o.radii.empty() ? default_radii(m, delta, o.radii_count) : o.radii;
    const auto centers = resolve_centers(m, o);
    const auto grid = default_lambda_grid(o.lambda_max);
    man.seeds.push_back(o.seed);
    p["delta"] = delta;
    p["lambda_max"] = o.lambda_max;
    p["max_lambda1"] = o.max_lambda1 ? json(*o.max_lambda1) : json(nullptr);
    p["max_lambda2"] = o.max_lambda2 ? json(*o.max_lambda2) : json(nullptr);
    const auto rep = llc_constants(m, delta, grid, centers, radii);
    result = to_json(rep, m);
    if (!rep.usable || radii.empty())
      code = kUnusable;
    else if ((o.max_lambda1 && !(rep.lambda1 <= *o.max_lambda1)) ||
             (o.max_lambda2 && !(rep.lambda2 <= *o.max_lambda2)))
      code = kThresholdFailure;
  } else if (o.suite == "distortion") {
    if (o.target.empty()) throw ParameterError("--target is required for the distortion suite");
    if (!o.claim_theta.empty() && !o.claim_eta.empty())
      throw ParameterError("give at most one of --claim-theta and --claim-eta");
    std::string mode = o.mode;
    if (mode.empty()) mode = o.claim_eta.empty() ? "qm" : "qs";
    if (mode != "qs" && mode != "qm") throw ParameterError("--mode must be qs or qm");
    if (mode == "qs" && !o.claim_theta.empty()) throw ParameterError("--claim-theta needs --mode qm");
    if (mode == "qm" && !o.claim_eta.empty()) throw ParameterError("--claim-eta needs --mode qs");
    const auto dst = load_space(o.target);
    man.inputs.push_back(o.target);
    const auto f = correspondence_by_label(m, dst);
    SamplingPlan plan;
    plan.exhaustive_limit = o.exhaustive_limit;
    plan.samples = o.samples;
    plan.seed = o.seed;
    man.seeds.push_back(o.seed);
    std::optional<PowerGauge> claim;
    const auto& claim_text = mode == "qm" ? o.claim_theta : o.claim_eta;
    if (!claim_text.empty()) claim = PowerGauge::parse(claim_text);
    p["mode"] = mode;
    p["claim"] = claim ? json(claim->to_string()) : json(nullptr);
    p["two_sided"] = o.two_sided;
    p["samples"] = o.samples;
    p["exhaustive_limit"] = o.exhaustive_limit;
    const auto prof = mode == "qm" ? qm_profile(m, dst, f, plan, claim, o.two_sided) : qs_profile(m, dst, f, plan, claim);
    result = to_json(prof, m);
    if (prof.bound && !prof.bound->pass) code = kThresholdFailure;
    if (!o.csv.empty()) {
      write_file(o.csv, envelope_csv(prof));
      man.outputs.push_back(o.csv);
    }
  } else if (o.suite == "quasicircle") {
    QuasicircleOptions qo;
    qo.delta = o.delta;
    qo.lambda_max = o.lambda_max;
    qo.center_count = o.centers;
    qo.radii_count = o.radii_count;
    qo.seed = o.seed;
    if (o.max_lambda1) qo.max_lambda1 = *o.max_lambda1;
    if (o.max_lambda2) qo.max_lambda2 = *o.max_lambda2;
    if (o.max_doubling) qo.max_doubling = *o.max_doubling;
    man.seeds.push_back(o.seed);
    p["max_lambda1"] = qo.max_lambda1;
    p["max_lambda2"] = qo.max_lambda2;
    p["max_doubling"] = qo.max_doubling;
    p["lambda_max"] = qo.lambda_max;
    const auto rep = quasicircle_check(m, qo);
    result = to_json(rep, m);
    if (rep.degenerate || !rep.usable)
      code = kUnusable;
    else if (!rep.pass)
      code = kThresholdFailure;
  }
  man.outputs.insert(man.outputs.begin(), o.output);

  json report;
  report["suite"] = o.suite;
  report["input"] = o.input;
  report["points"] = m.size();
  report["pass"] = code == kPass;
  report["exit_code"] = code;
  report["result"] = std::move(result);
  report["manifest"] = to_json(man);
  emit(o.output, report.dump(2) + "\n", out);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Finite metric space toolkit", "metricforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenerateOpts g;
  auto* gen = app.add_subcommand("generate", "Generate a sample space");
  gen->add_option("--kind", g.kind, "grid, disk, disk-grid, sphere-cap, halfplane, random or circle")->required();
  gen->add_option("--side", g.side);
  gen->add_option("--spacing", g.spacing);
  gen->add_option("--n", g.n);
  gen->add_option("--radius", g.radius);
  gen->add_option("--eps", g.eps);
  gen->add_option("--gap", g.gap, "Gap in degrees (circle)");
  gen->add_option("--seed", g.seed);
  g.mark_opt = gen->add_flag("--mark-boundary,!--no-mark-boundary", g.mark_boundary);
  gen->add_option("-o,--output", g.output);

  IoOpts w;
  auto* wc = app.add_subcommand("warp", "Sphericalize about a basepoint");
  wc->add_option("-i,--input", w.input)->required();
  wc->add_option("--basepoint", w.basepoint)->required();
  wc->add_option("-o,--output", w.output);

  IoOpts d;
  auto* dc = app.add_subcommand("double", "Glue two copies along the boundary");
  dc->add_option("-i,--input", d.input)->required();
  dc->add_option("-o,--output", d.output);

  CheckOpts c;
  auto* cc = app.add_subcommand("check", "Run a verifier suite");
  cc->add_option("-i,--input", c.input)->required();
  cc->add_option("--suite", c.suite)
      ->required()
      ->check(CLI::IsMember({"metric", "llc", "regularity", "distortion", "quasicircle"}));
  cc->add_option("-o,--output", c.output);
  cc->add_option("--seed", c.seed);
  cc->add_option("--tol", c.tol);
  cc->add_option("--q", c.q);
  cc->add_option("--radii", c.radii)->delimiter(',');
  cc->add_option("--radii-count", c.radii_count);
  cc->add_option("--centers", c.centers, "Number of sampled centers");
  cc->add_option("--center-labels", c.center_labels)->delimiter(',');
  cc->add_option("--eps", c.eps, "Use the eps-pre-measure instead of masses");
  cc->add_option("--max-k", c.max_k);
  cc->add_option("--max-doubling", c.max_doubling);
  cc->add_flag("--no-doubling", c.no_doubling);
  cc->add_option("--delta", c.delta);
  cc->add_option("--lambda-max", c.lambda_max);
  cc->add_option("--max-lambda1", c.max_lambda1);
  cc->add_option("--max-lambda2", c.max_lambda2);
  cc->add_option("--target", c.target);
  cc->add_option("--mode", c.mode);
  cc->add_option("--claim-theta", c.claim_theta);
  cc->add_option("--claim-eta", c.claim_eta);
  cc->add_flag("--two-sided", c.two_sided);
  cc->add_option("--samples", c.samples);
  cc->add_option("--exhaustive-limit", c.exhaustive_limit);
  cc->add_option("--csv", c.csv, "Envelope CSV export");

  std::string replay_path;
  auto* rc = app.add_subcommand("replay", "Re-run the command recorded in a manifest or report");
  rc->add_option("manifest", replay_path)->required();

  std::vector<std::string> argv_store{"metricforge"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e, out, err);
    return rc_code == 0 ? kPass : kUsageError;
  }

  try {
    if (rc->parsed()) {
      const auto j = json::parse(read_file(replay_path));
      const auto man = manifest_from_json(j.contains("manifest") ? j.at("manifest") : j);
      if (man.command == "replay" || man.args.empty()) throw StructuralError("manifest does not record a command");
      return run(man.args, out, err);
    }
    auto man = manifest_for(args);
    int code = kPass;
    std::string primary;
    if (gen->parsed()) {
      code = cmd_generate(g, man, out);
      primary = g.output;
    } else if (wc->parsed()) {
      code = cmd_warp(w, man, out);
      primary = w.output;
    } else if (dc->parsed()) {
      code = cmd_double(d, man, out);
      primary = d.output;
    } else {
      code = cmd_check(c, man, out);
      primary = c.output;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_sidecar(primary, man, secs);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace metricforge::cli
