#pragma once

// JSON scenario files. Every validation failure names the offending field
// path, e.g. `nodes[3].links` or `channel.loss`.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "floodcast/error.hpp"
#include "floodcast/simnet/scenario.hpp"

namespace floodcast::simnet {

namespace io {

using nlohmann::json;

class Obj {
public:
  Obj(const json &j, std::string path, std::initializer_list<const char *> keys)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ScenarioError(path_, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto &item : j_.items())
      if (!allowed.count(item.key()))
        throw ScenarioError(at(item.key()), "unexpected field");
  }

  std::string at(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string &key) const {
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json &raw(const std::string &key) const {
    if (!has(key))
      throw ScenarioError(at(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string &key) const {
    const auto &v = raw(key);
    if (!v.is_number())
      throw ScenarioError(at(key), "expected a number");
    return v.get<double>();
  }

  double number(const std::string &key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string &key) const {
    const auto &v = raw(key);
    if (!v.is_number_integer())
      throw ScenarioError(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer(const std::string &key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string text(const std::string &key) const {
    const auto &v = raw(key);
    if (!v.is_string())
      throw ScenarioError(at(key), "expected a string");
    return v.get<std::string>();
  }

  const json &array(const std::string &key) const {
    const auto &v = raw(key);
    if (!v.is_array())
      throw ScenarioError(at(key), "expected an array");
    return v;
  }

private:
  const json &j_;
  std::string path_;
};

inline std::string index(const std::string &path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline std::vector<double> row(const json &j, const std::string &path,
                               std::size_t width) {
  if (!j.is_array() || j.size() != width)
    throw ScenarioError(path, "expected an array of " + std::to_string(width) +
                                  " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < width; ++i) {
    if (!j[i].is_number())
      throw ScenarioError(index(path, i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

inline PowerProfile power(const json &j, const std::string &path,
                          PowerProfile base) {
  Obj o(j, path, {"sensing_mw", "transmit_mw", "receive_mw", "sleep_mw"});
  base.sensing = o.number("sensing_mw", base.sensing);
  base.transmit = o.number("transmit_mw", base.transmit);
  base.receive = o.number("receive_mw", base.receive);
  base.sleep = o.number("sleep_mw", base.sleep);
  for (double d : {base.sensing, base.transmit, base.receive, base.sleep})
    if (!(d > 0.0))
      throw ScenarioError(path, "power draws must be positive");
  return base;
}

inline PredictorConfig predictor(const json &j, const std::string &path) {
  Obj o(j, path,
        {"flood_line", "threshold", "reliability_period", "capacity",
         "time_set", "action_time", "weight_fn", "max_iter",
         "tuning_constant", "purge_weight"});
  PredictorConfig c;
  c.flood_line = o.number("flood_line", c.flood_line);
  c.threshold = o.number("threshold", c.threshold);
  if (o.has("reliability_period"))
    c.reliability_period = o.number("reliability_period");
  const auto capacity = o.integer("capacity", 10);
  if (capacity < 1)
    throw ScenarioError(o.at("capacity"), "must be positive");
  c.capacity = static_cast<std::size_t>(capacity);
  if (o.has("time_set")) {
    const auto &ts = o.array("time_set");
    c.time_set.intervals = row(ts, o.at("time_set"), ts.size());
  }
  c.time_set.action_time = o.number("action_time", c.time_set.action_time);
  if (o.has("weight_fn")) {
    const auto fn = o.text("weight_fn");
    if (fn == "bisquare")
      c.robust.weight_function = WeightFunction::Bisquare;
    else if (fn == "andrews")
      c.robust.weight_function = WeightFunction::Andrews;
    else
      throw ScenarioError(o.at("weight_fn"), "expected bisquare or andrews");
  }
  c.robust.max_iterations =
      static_cast<int>(o.integer("max_iter", c.robust.max_iterations));
  c.robust.tuning_constant =
      o.number("tuning_constant", c.robust.tuning_constant);
  c.purge_weight = o.number("purge_weight", c.purge_weight);
  try {
    c.validate();
  } catch (const InvalidInput &e) {
    throw ScenarioError(path, e.what());
  }
  return c;
}

inline ChannelModel channel(const json &j, const std::string &path) {
  Obj o(j, path, {"loss", "corruption", "latency_s", "links"});
  ChannelModel c;
  c.loss = o.number("loss", 0.0);
  c.corruption = o.number("corruption", 0.0);
  c.latency_s = o.integer("latency_s", 1);
  if (o.has("links")) {
    const auto &links = o.array("links");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string lp = index(o.at("links"), i);
      Obj l(links[i], lp, {"from", "to", "loss", "corruption", "latency_s"});
      LinkOverride ov;
      ov.from = static_cast<int>(l.integer("from"));
      ov.to = static_cast<int>(l.integer("to"));
      if (l.has("loss"))
        ov.loss = l.number("loss");
      if (l.has("corruption"))
        ov.corruption = l.number("corruption");
      if (l.has("latency_s"))
        ov.latency_s = l.integer("latency_s");
      c.overrides.push_back(ov);
    }
  }
  return c;
}

inline Reading reading_row(const json &j, const std::string &path) {
  const auto v = row(j, path, 4);
  Reading r;
  r.t = v[0];
  r.level = v[1];
  r.rainfall = v[2];
  r.discharge = v[3];
  return r;
}

inline TriggerKind trigger_kind(const std::string &s, const std::string &path) {
  if (s == "event")
    return TriggerKind::Event;
  if (s == "query")
    return TriggerKind::Query;
  throw ScenarioError(path, "expected event or query");
}

} // namespace io

inline Scenario parse_scenario(const nlohmann::json &j) {
  using io::Obj;
  Obj top(j, "",
          {"seed", "horizon_min", "heartbeat_min", "missed_heartbeats",
           "sample_s", "transmit_s", "sensor_noise_m", "predictor",
           "channel", "event_watch", "power_defaults", "nodes",
           "environment", "calibration", "triggers", "failures"});
  Scenario s;
  const auto seed = top.integer("seed", static_cast<std::int64_t>(s.seed));
  if (seed < 0)
    throw ScenarioError("seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.horizon = top.number("horizon_min");
  s.heartbeat_period = top.number("heartbeat_min", s.heartbeat_period);
  s.missed_heartbeats =
      static_cast<int>(top.integer("missed_heartbeats", s.missed_heartbeats));
  s.sample_s = top.integer("sample_s", s.sample_s);
  s.transmit_s = top.integer("transmit_s", s.transmit_s);
  s.sensor_noise = top.number("sensor_noise_m", 0.0);
  if (!(s.sensor_noise >= 0.0))
    throw ScenarioError("sensor_noise_m", "must be non-negative");
  if (top.has("predictor"))
    s.predictor = io::predictor(top.raw("predictor"), "predictor");
  if (top.has("channel"))
    s.channel = io::channel(top.raw("channel"), "channel");
  if (top.has("event_watch")) {
    Obj ew(top.raw("event_watch"), "event_watch", {"period_s", "delta_m"});
    s.event_watch.period_s = ew.integer("period_s", s.event_watch.period_s);
    s.event_watch.delta = ew.number("delta_m", s.event_watch.delta);
  }
  PowerProfile defaults;
  if (top.has("power_defaults"))
    defaults = io::power(top.raw("power_defaults"), "power_defaults", {});

  const auto &nodes = top.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = io::index("nodes", i);
    Obj o(nodes[i], path, {"id", "kind", "zone", "links", "power"});
    NodeSpec n;
    n.id = static_cast<int>(o.integer("id"));
    const auto kind = node_kind_from_string(o.text("kind"));
    if (!kind)
      throw ScenarioError(o.at("kind"), "unknown node kind");
    n.kind = *kind;
    n.zone = static_cast<int>(o.integer("zone", 0));
    if (o.has("links")) {
      const auto &links = o.array("links");
      for (std::size_t k = 0; k < links.size(); ++k) {
        if (!links[k].is_number_integer())
          throw ScenarioError(io::index(o.at("links"), k),
                              "expected a node id");
        n.links.push_back(links[k].get<int>());
      }
    }
    n.power = o.has("power") ? io::power(o.raw("power"), o.at("power"),
                                         defaults)
                             : defaults;
    s.nodes.push_back(std::move(n));
  }

  if (top.has("environment")) {
    const auto &env = top.array("environment");
    for (std::size_t i = 0; i < env.size(); ++i) {
      const std::string path = io::index("environment", i);
      Obj o(env[i], path, {"zone", "samples"});
      const int zone = static_cast<int>(o.integer("zone"));
      const auto &rows = o.array("samples");
      std::vector<EnvironmentSample> samples;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto r = io::reading_row(rows[k], io::index(o.at("samples"), k));
        samples.push_back({r.t, r.rainfall, r.discharge, r.level});
      }
      try {
        if (!s.environment.emplace(zone, EnvironmentTrace(samples)).second)
          throw ScenarioError(o.at("zone"), "duplicate environment zone");
      } catch (const InvalidInput &e) {
        throw ScenarioError(o.at("samples"), e.what());
      }
    }
  }

  if (top.has("calibration")) {
    const auto &cal = top.array("calibration");
    for (std::size_t i = 0; i < cal.size(); ++i) {
      const std::string path = io::index("calibration", i);
      Obj o(cal[i], path, {"zone", "readings"});
      auto &out = s.calibration[static_cast<int>(o.integer("zone"))];
      const auto &rows = o.array("readings");
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string rp = io::index(o.at("readings"), k);
        out.push_back(io::reading_row(rows[k], rp));
        if (out.size() > 1 && !(out.back().t > out[out.size() - 2].t))
          throw ScenarioError(rp, "calibration times must strictly increase");
      }
    }
  }

  if (top.has("triggers")) {
    const auto &trig = top.array("triggers");
    for (std::size_t i = 0; i < trig.size(); ++i) {
      const std::string path = io::index("triggers", i);
      Obj o(trig[i], path, {"t", "kind", "zone"});
      s.triggers.push_back({o.number("t"),
                            io::trigger_kind(o.text("kind"), o.at("kind")),
                            static_cast<int>(o.integer("zone"))});
    }
  }

  if (top.has("failures")) {
    const auto &fail = top.array("failures");
    for (std::size_t i = 0; i < fail.size(); ++i) {
      Obj o(fail[i], io::index("failures", i), {"node", "t"});
      s.failures.push_back(
          {static_cast<int>(o.integer("node")), o.number("t")});
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ScenarioError(path, "cannot open scenario file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error &e) {
    throw ScenarioError(path, e.what());
  }
  return parse_scenario(j);
}

} // namespace floodcast::simnet
