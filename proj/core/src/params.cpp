#include "pif/params.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "pif/errors.hpp"
#include "pif/task.hpp"

namespace pif {
namespace {

using json = nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown key '" + item.key() + "' in " + where);
  }
}

double get_num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError("missing key '" + std::string(key) + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError("key '" + std::string(key) + "' in " + where + " must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError("key '" + std::string(key) + "' in " + where + " must be finite");
  return d;
}

json dump_delay(const DelayModelParams& p) { return {{"v1", p.v1}, {"v2", p.v2}}; }
json dump_stall(const StallModelParams& p) { return {{"v3", p.v3}, {"v4", p.v4}}; }

DelayModelParams read_delay(const json& j, const std::string& where) {
  check_keys(j, {"v1", "v2"}, where);
  return {get_num(j, "v1", where), get_num(j, "v2", where)};
}

StallModelParams read_stall(const json& j, const std::string& where) {
  check_keys(j, {"v3", "v4"}, where);
  return {get_num(j, "v3", where), get_num(j, "v4", where)};
}

}  // namespace

const ModelParamSet& builtin_params() {
  static const ModelParamSet kParams = [] {
    ModelParamSet p;
    for (const auto& t : builtin_tasks()) p.jnd_s[t.name] = t.jnd_s;
    p.delay = {
        {"SP", {4.786, 7.99e-5}},
        {"TTT", {4.678, 1.56e-4}},
        {"MAR", {4.777, 3.57e-4}},
        {"BR", {4.764, 4.86e-4}},
    };
    p.stall = {
        {"SP", {4.905, 4.282}},
        {"TTT", {4.965, 5.301}},
        {"MAR", {4.911, 6.611}},
        {"BR", {4.937, 9.291}},
    };
    p.generalized = {6.43e-4, 0.679, 6.608, 0.361, 4.751, 4.929, 0.104, 0.192};
    p.baseline1 = {4.726, 2.0e-4, 4.878, 6.096};
    p.baseline2 = {1.07, -0.24, 0.15};
    p.baseline3 = {4.208, -3.0e-4, -12.39};
    return p;
  }();
  return kParams;
}

std::string serialize_params(const ModelParamSet& p) {
  json delay = json::object();
  for (const auto& [name, dp] : p.delay) delay[name] = dump_delay(dp);
  json stall = json::object();
  for (const auto& [name, sp] : p.stall) stall[name] = dump_stall(sp);
  json j = {
      {"jnd_s", p.jnd_s},
      {"delay", delay},
      {"stall", stall},
      {"generalized",
       {{"alpha", p.generalized.alpha},
        {"beta", p.generalized.beta},
        {"rho", p.generalized.rho},
        {"sigma", p.generalized.sigma},
        {"v1_bar", p.generalized.v1_bar},
        {"v3_bar", p.generalized.v3_bar},
        {"v5", p.generalized.v5},
        {"v6", p.generalized.v6}}},
      {"baseline1",
       {{"v1", p.baseline1.v1}, {"v2", p.baseline1.v2}, {"v3", p.baseline1.v3}, {"v4", p.baseline1.v4}}},
      {"baseline2", {{"a", p.baseline2.a}, {"b_per_s", p.baseline2.b_per_s}, {"s", p.baseline2.s}}},
      {"baseline3",
       {{"l0", p.baseline3.l0}, {"l1_per_ms", p.baseline3.l1_per_ms}, {"l2", p.baseline3.l2}}},
  };
  return j.dump(2) + "\n";
}

ModelParamSet parse_params(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, {"jnd_s", "delay", "stall", "generalized", "baseline1", "baseline2", "baseline3"},
             "parameter set");

  ModelParamSet p;
  if (!j.contains("jnd_s") || !j.at("jnd_s").is_object())
    throw ParseError("parameter set needs a 'jnd_s' object");
  for (const auto& item : j.at("jnd_s").items()) {
    p.jnd_s[item.key()] = get_num(j.at("jnd_s"), item.key().c_str(), "jnd_s");
    if (p.jnd_s[item.key()] <= 0)
      throw ParseError("jnd_s['" + item.key() + "'] must be > 0");
  }
  if (!j.contains("delay") || !j.at("delay").is_object())
    throw ParseError("parameter set needs a 'delay' object");
  for (const auto& item : j.at("delay").items())
    p.delay[item.key()] = read_delay(item.value(), "delay['" + item.key() + "']");
  if (!j.contains("stall") || !j.at("stall").is_object())
    throw ParseError("parameter set needs a 'stall' object");
  for (const auto& item : j.at("stall").items())
    p.stall[item.key()] = read_stall(item.value(), "stall['" + item.key() + "']");

  if (!j.contains("generalized")) throw ParseError("parameter set needs 'generalized'");
  const json& g = j.at("generalized");
  check_keys(g, {"alpha", "beta", "rho", "sigma", "v1_bar", "v3_bar", "v5", "v6"}, "generalized");
  p.generalized = {get_num(g, "alpha", "generalized"),  get_num(g, "beta", "generalized"),
                   get_num(g, "rho", "generalized"),    get_num(g, "sigma", "generalized"),
                   get_num(g, "v1_bar", "generalized"), get_num(g, "v3_bar", "generalized"),
                   get_num(g, "v5", "generalized"),     get_num(g, "v6", "generalized")};

  if (!j.contains("baseline1")) throw ParseError("parameter set needs 'baseline1'");
  const json& b1 = j.at("baseline1");
  check_keys(b1, {"v1", "v2", "v3", "v4"}, "baseline1");
  p.baseline1 = {get_num(b1, "v1", "baseline1"), get_num(b1, "v2", "baseline1"),
                 get_num(b1, "v3", "baseline1"), get_num(b1, "v4", "baseline1")};

  if (!j.contains("baseline2")) throw ParseError("parameter set needs 'baseline2'");
  const json& b2 = j.at("baseline2");
  check_keys(b2, {"a", "b_per_s", "s"}, "baseline2");
  p.baseline2 = {get_num(b2, "a", "baseline2"), get_num(b2, "b_per_s", "baseline2"),
                 get_num(b2, "s", "baseline2")};

  if (!j.contains("baseline3")) throw ParseError("parameter set needs 'baseline3'");
  const json& b3 = j.at("baseline3");
  check_keys(b3, {"l0", "l1_per_ms", "l2"}, "baseline3");
  p.baseline3 = {get_num(b3, "l0", "baseline3"), get_num(b3, "l1_per_ms", "baseline3"),
                 get_num(b3, "l2", "baseline3")};
  return p;
}

ModelParamSet load_params(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

void save_params(std::ostream& out, const ModelParamSet& p) { out << serialize_params(p); }

}  // namespace pif
