#include "rugose/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rugose {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Run: return "run";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::TraceCheck: return "trace-check";
    case ExperimentKind::KornCheck: return "korn-check";
    case ExperimentKind::BogovskiiCheck: return "bogovskii-check";
    case ExperimentKind::Geom: return "geom";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) fail("unknown key \"" + key + "\" in " + where);
  }
}

double need_num(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where + " is missing \"" + std::string(key) + "\"");
  if (!obj[key].is_number()) fail(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

double opt_num(const json& obj, const std::string& where, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) fail(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

int opt_int(const json& obj, const std::string& where, const char* key, int dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer()) fail(where + "." + key + " must be an integer");
  return obj[key].get<int>();
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "run") return ExperimentKind::Run;
  if (s == "sweep") return ExperimentKind::Sweep;
  if (s == "trace-check") return ExperimentKind::TraceCheck;
  if (s == "korn-check") return ExperimentKind::KornCheck;
  if (s == "bogovskii-check") return ExperimentKind::BogovskiiCheck;
  if (s == "geom") return ExperimentKind::Geom;
  fail("unknown experiment kind \"" + s + "\"");
}

RoughProfile parse_profile(const json& p) {
  if (!p.is_object()) fail("\"profile\" must be an object");
  check_keys(p, "profile", {"kind", "c0", "c1", "c2", "table"});
  if (!p.contains("kind") || !p["kind"].is_string()) fail("profile.kind must be a string");
  const std::string kind = p["kind"].get<std::string>();
  try {
    if (kind == "tabulated") {
      if (!p.contains("table") || !p["table"].is_array())
        fail("tabulated profile needs a \"table\" array");
      std::vector<std::vector<double>> t;
      for (const auto& row : p["table"]) {
        if (!row.is_array()) fail("profile.table must be an array of arrays");
        t.emplace_back();
        for (const auto& v : row) {
          if (!v.is_number()) fail("profile.table entries must be numbers");
          t.back().push_back(v.get<double>());
        }
      }
      return make_tabulated_profile(t);
    }
    const double c0 = need_num(p, "profile", "c0");
    const double c1 = opt_num(p, "profile", "c1", 0.0);
    const double c2 = opt_num(p, "profile", "c2", 0.0);
    if (kind == "flat") return make_profile(ProfileKind::Flat, c0, 0, 0);
    if (kind == "riblet") return make_profile(ProfileKind::Riblet, c0, c1, 0);
    if (kind == "eggcarton") return make_profile(ProfileKind::EggCarton, c0, c1, c2);
    fail("unknown profile kind \"" + kind + "\"");
  } catch (const Error& e) {
    if (e.code() == Errc::NonPositiveProfile || e.code() == Errc::InvalidArgument)
      fail(std::string("profile: ") + e.what());
    throw;
  }
}

InitialCondition parse_ic(const json& o) {
  check_keys(o, "ic", {"type", "rho0", "u1", "u2"});
  if (!o.contains("type") || !o["type"].is_string()) fail("ic.type must be a string");
  const std::string type = o["type"].get<std::string>();
  if (type == "uniform_rest") {
    UniformRest r;
    r.rho0 = opt_num(o, "ic", "rho0", 1.0);
    if (!(r.rho0 > 0)) fail("ic.rho0 must be > 0");
    return r;
  }
  if (type == "shear") {
    Shear s;
    s.rho0 = opt_num(o, "ic", "rho0", 1.0);
    s.u1 = opt_num(o, "ic", "u1", 1.0);
    s.u2 = opt_num(o, "ic", "u2", 0.0);
    if (!(s.rho0 > 0)) fail("ic.rho0 must be > 0");
    return s;
  }
  fail("unknown ic.type \"" + type + "\"");
}

double checked_epsilon(double e) {
  try {
    (void)make_domain_spec(make_profile(ProfileKind::Flat, 1, 0, 0), e);
  } catch (const Error& err) {
    fail(std::string("epsilon: ") + err.what());
  }
  return e;
}

}  // namespace

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) fail("config root must be a JSON object");
  check_keys(root, "config",
             {"experiment", "profile", "epsilon", "epsilons", "grid", "fluid", "ic",
              "time", "output", "trace", "korn", "bogovskii", "seed"});

  Config cfg;
  if (root.contains("experiment")) {
    if (!root["experiment"].is_string()) fail("\"experiment\" must be a string");
    cfg.experiment = parse_kind(root["experiment"].get<std::string>());
  }
  if (!root.contains("profile")) fail("config is missing \"profile\"");
  cfg.profile = parse_profile(root["profile"]);

  if (root.contains("epsilon"))
    cfg.epsilon = checked_epsilon(need_num(root, "config", "epsilon"));
  if (root.contains("epsilons")) {
    if (!root["epsilons"].is_array()) fail("\"epsilons\" must be an array");
    for (const auto& v : root["epsilons"]) {
      if (!v.is_number()) fail("epsilons entries must be numbers");
      cfg.epsilons.push_back(checked_epsilon(v.get<double>()));
    }
    for (size_t i = 1; i < cfg.epsilons.size(); ++i)
      if (!(cfg.epsilons[i] < cfg.epsilons[i - 1]))
        fail("epsilons must be strictly decreasing");
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"cells_per_period", "nz"});
    cfg.grid.cells_per_period = opt_int(g, "grid", "cells_per_period", 16);
    cfg.grid.nz = opt_int(g, "grid", "nz", 32);
    if (cfg.grid.cells_per_period < 1) fail("grid.cells_per_period must be >= 1");
    if (cfg.grid.nz < 1) fail("grid.nz must be >= 1");
  }

  if (root.contains("fluid")) {
    const json& f = root["fluid"];
    check_keys(f, "fluid", {"a", "gamma", "mu", "eta"});
    try {
      cfg.fluid.emplace(need_num(f, "fluid", "a"), need_num(f, "fluid", "gamma"),
                        need_num(f, "fluid", "mu"), opt_num(f, "fluid", "eta", 0.0));
    } catch (const Error& e) {
      fail(std::string("fluid: ") + e.what());
    }
  }

  if (root.contains("ic")) cfg.ic = parse_ic(root["ic"]);

  if (root.contains("time")) {
    const json& t = root["time"];
    check_keys(t, "time", {"t_end", "cfl", "records"});
    cfg.time.t_end = opt_num(t, "time", "t_end", 1.0);
    cfg.time.cfl = opt_num(t, "time", "cfl", 0.4);
    cfg.time.records = opt_int(t, "time", "records", 100);
    if (!(cfg.time.t_end >= 0)) fail("time.t_end must be >= 0");
    if (!(cfg.time.cfl > 0 && cfg.time.cfl <= 0.9)) fail("time.cfl must lie in (0, 0.9]");
    if (cfg.time.records < 1) fail("time.records must be >= 1");
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"dir", "snapshots", "svg"});
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) fail("output.dir must be a string");
      cfg.output.dir = o["dir"].get<std::string>();
    }
    if (o.contains("snapshots")) {
      if (!o["snapshots"].is_boolean()) fail("output.snapshots must be a boolean");
      cfg.output.snapshots = o["snapshots"].get<bool>();
    }
    if (o.contains("svg")) {
      if (!o["svg"].is_boolean()) fail("output.svg must be a boolean");
      cfg.output.svg = o["svg"].get<bool>();
    }
  }

  if (root.contains("trace")) {
    const json& t = root["trace"];
    check_keys(t, "trace", {"mode"});
    cfg.trace.mode = opt_int(t, "trace", "mode", 1);
    if (cfg.trace.mode < 1) fail("trace.mode must be >= 1");
  }

  if (root.contains("korn")) {
    const json& k = root["korn"];
    check_keys(k, "korn", {"modes", "m", "M", "nu", "t_snapshot"});
    if (k.contains("modes")) {
      if (!k["modes"].is_array()) fail("korn.modes must be an array");
      cfg.korn.modes.clear();
      for (const auto& v : k["modes"]) {
        if (!v.is_number_integer() || v.get<int>() < 1)
          fail("korn.modes entries must be integers >= 1");
        cfg.korn.modes.push_back(v.get<int>());
      }
      if (cfg.korn.modes.empty()) fail("korn.modes must not be empty");
    }
    cfg.korn.m = opt_num(k, "korn", "m", cfg.korn.m);
    cfg.korn.M = opt_num(k, "korn", "M", cfg.korn.M);
    cfg.korn.nu = opt_num(k, "korn", "nu", 0.0);
    cfg.korn.t_snapshot = opt_num(k, "korn", "t_snapshot", cfg.korn.t_snapshot);
    if (!(cfg.korn.m > 0)) fail("korn.m must be > 0");
    if (!(cfg.korn.t_snapshot >= 0)) fail("korn.t_snapshot must be >= 0");
  }

  if (root.contains("bogovskii")) {
    const json& b = root["bogovskii"];
    check_keys(b, "bogovskii", {"tolerance", "max_iterations"});
    cfg.bogovskii.tolerance = opt_num(b, "bogovskii", "tolerance", cfg.bogovskii.tolerance);
    cfg.bogovskii.max_iterations =
        opt_int(b, "bogovskii", "max_iterations", cfg.bogovskii.max_iterations);
    if (!(cfg.bogovskii.tolerance > 0)) fail("bogovskii.tolerance must be > 0");
    if (cfg.bogovskii.max_iterations < 1) fail("bogovskii.max_iterations must be >= 1");
  }

  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
      fail("\"seed\" must be an unsigned integer");
    cfg.seed = root["seed"].get<uint64_t>();
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate_for(const Config& cfg, ExperimentKind kind) {
  if (cfg.experiment && *cfg.experiment != kind)
    fail("config experiment kind \"" + to_string(*cfg.experiment) +
         "\" does not match the requested \"" + to_string(kind) + "\"");
  auto need_eps_list = [&]() {
    if (cfg.epsilons.empty()) fail(to_string(kind) + " needs a non-empty \"epsilons\" list");
  };
  switch (kind) {
    case ExperimentKind::Run:
      if (!cfg.epsilon) fail("run needs \"epsilon\"");
      if (!cfg.fluid) fail("run needs \"fluid\"");
      if (!cfg.ic) fail("run needs \"ic\"");
      break;
    case ExperimentKind::Sweep:
      need_eps_list();
      if (!cfg.fluid) fail("sweep needs \"fluid\"");
      if (!cfg.ic) fail("sweep needs \"ic\"");
      break;
    case ExperimentKind::TraceCheck:
      need_eps_list();
      break;
    case ExperimentKind::KornCheck:
      need_eps_list();
      if (!cfg.fluid) fail("korn-check needs \"fluid\"");
      if (!cfg.ic) fail("korn-check needs \"ic\"");
      break;
    case ExperimentKind::BogovskiiCheck:
      need_eps_list();
      break;
    case ExperimentKind::Geom:
      break;
  }
}

}  // namespace rugose
