#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "metricforge/analysis.hpp"
#include "metricforge/core.hpp"
#include "metricforge/distortion.hpp"
#include "metricforge/io.hpp"
#include "metricforge/warp.hpp"

namespace metricforge {

inline constexpr const char* kVersion = "0.1.0";

// JSON has no infinity; non-finite values are written as the strings "inf",
// "-inf" and "nan".
inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double num_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    throw StructuralError("bad number '" + s + "'");
  }
  return j.get<double>();
}

// Provenance block embedded in every report. Wall-clock duration is kept out
// of it so reports replay byte for byte; the CLI writes it to a sidecar.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // full argument vector after the program name
  std::map<std::string, json> parameters;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string version = kVersion;
};

inline json to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["args"] = m.args;
  j["parameters"] = m.parameters;
  j["seeds"] = m.seeds;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["version"] = m.version;
  return j;
}

inline RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.parameters = j.at("parameters").get<std::map<std::string, json>>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.version = j.at("version").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed manifest: ") + e.what());
  }
}

inline json to_json(const ValidationReport& r, const FiniteMetricSpace& m) {
  json v = json::array();
  for (const auto& w : r.violations) {
    json e;
    e["axiom"] = std::string(to_string(w.axiom));
    e["witness"] = {m.label(w.i), m.label(w.j), m.label(w.k)};
    e["excess"] = num(w.excess);
    v.push_back(std::move(e));
  }
  return {{"ok", r.ok()}, {"total", r.total}, {"violations", std::move(v)}};
}

inline json to_json(const InclusionReport& r, const WarpedSpace& w) {
  json j;
  j["center"] = w.base.label(r.center);
  j["r"] = num(r.r);
  j["C"] = num(r.C);
  if (!r.precondition_ok) {
    j["status"] = "precondition failed";
    return j;
  }
  j["status"] = r.ok() ? "ok" : "violated";
  j["inner_radius"] = num(r.inner_radius);
  j["outer_radius"] = num(r.outer_radius);
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"point", w.base.label(x.point)}, {"closed", x.closed}, {"outer", x.outer}});
  j["violations"] = std::move(v);
  return j;
}

inline json labels_of(const FiniteMetricSpace& m, std::span<const Index> idx) {
  json out = json::array();
  for (Index i : idx) out.push_back(m.label(i));
  return out;
}

inline json nums(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

inline json to_json(const RegularityReport& r, const FiniteMetricSpace& m) {
  json j;
  j["Q"] = num(r.Q);
  j["K_hat"] = num(r.K_hat);
  j["measure"] = r.measure;
  j["eps"] = r.eps ? num(*r.eps) : json(nullptr);
  j["doubling_evaluated"] = r.doubling_evaluated;
  j["M_hat"] = r.doubling_evaluated ? json(r.M_hat) : json(nullptr);
  j["radii"] = nums(r.radii);
  j["centers"] = labels_of(m, r.centers);
  if (r.worst_witness)
    j["worst"] = {{"center", m.label(r.worst_witness->center)},
                  {"radius", num(r.worst_witness->radius)},
                  {"ratio", num(r.worst_witness->ratio)}};
  else
    j["worst"] = nullptr;
  return j;
}

inline json to_json(const LLCWitness& w, const FiniteMetricSpace& m) {
  return {{"center", m.label(w.center)},
          {"radius", num(w.radius)},
          {"lambda", num(w.lambda)},
          {"pair", {m.label(w.x), m.label(w.y)}}};
}

inline json to_json(const LLCReport& r, const FiniteMetricSpace& m) {
  json j;
  j["usable"] = r.usable;
  j["delta"] = num(r.delta);
  j["lambda1"] = num(r.lambda1);
  j["lambda2"] = num(r.lambda2);
  j["lambda_grid"] = nums(r.grid);
  j["radii"] = nums(r.radii);
  j["centers"] = labels_of(m, r.centers);
  j["llc1_configs"] = r.llc1_configs;
  j["llc2_configs"] = r.llc2_configs;
  j["llc2_vacuous"] = r.llc2_vacuous;
  json f1 = json::array(), f2 = json::array();
  for (const auto& w : r.llc1_failures) f1.push_back(to_json(w, m));
  for (const auto& w : r.llc2_failures) f2.push_back(to_json(w, m));
  j["llc1_witnesses"] = std::move(f1);
  j["llc2_witnesses"] = std::move(f2);
  return j;
}

inline json to_json(const QuasicircleReport& r, const FiniteMetricSpace& m) {
  json j;
  j["pass"] = r.pass;
  j["degenerate"] = r.degenerate;
  j["usable"] = r.usable;
  j["M_hat"] = r.M_hat;
  j["lambda1"] = num(r.lambda1);
  j["lambda2"] = num(r.lambda2);
  j["witness"] = r.witness ? to_json(*r.witness, m) : json(nullptr);
  if (!r.degenerate) j["llc"] = to_json(r.llc, m);
  return j;
}

inline json to_json(const DistortionBin& b) {
  return {{"lower", num(b.lower)},       {"upper", num(b.upper)},        {"count", b.count},
          {"t_min", num(b.t_min)},       {"t_max", num(b.t_max)},        {"envelope", num(b.envelope)},
          {"envelope_min", num(b.envelope_min)}};
}

inline json to_json(const DistortionProfile& p, const FiniteMetricSpace& src) {
  json j;
  j["kind"] = std::string(to_string(p.kind));
  j["exhaustive"] = p.exhaustive;
  j["seed"] = p.seed;
  j["evaluated"] = p.evaluated;
  j["degenerate"] = p.degenerate;
  json bins = json::array();
  for (const auto& b : p.bins) bins.push_back(to_json(b));
  j["bins"] = std::move(bins);
  j["underflow"] = to_json(p.underflow);
  j["overflow"] = to_json(p.overflow);
  if (p.bound) {
    const auto& b = *p.bound;
    j["bound"] = {{"claim", b.claim.to_string()},
                  {"two_sided", b.two_sided},
                  {"pass", b.pass},
                  {"violations", b.violations},
                  {"worst_ratio", num(b.worst_ratio)},
                  {"worst_tuple", labels_of(src, b.worst_tuple)},
                  {"worst_t", num(b.worst_t)},
                  {"worst_out", num(b.worst_out)}};
  } else {
    j["bound"] = nullptr;
  }
  return j;
}

// CSV export of a profile's envelope for external plotting.
inline std::string envelope_csv(const DistortionProfile& p) {
  std::string out = "lower,upper,count,t_min,t_max,envelope_min,envelope\n";
  char buf[256];
  for (const auto& b : p.bins) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g,%.17g,%.17g\n", b.lower, b.upper, b.count, b.t_min,
                  b.t_max, b.envelope_min, b.envelope);
    out += buf;
  }
  return out;
}

}  // namespace metricforge
