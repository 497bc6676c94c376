#pragma once

// Discrete-event simulation of a monitoring deployment on a one-second
// clock. Pending actions are ordered by (tick, node id, sequence); every
// trace record is emitted by the action being processed, so the trace
// inherits that order.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/predictor.hpp"
#include "floodcast/simnet/heartbeat.hpp"
#include "floodcast/simnet/power.hpp"
#include "floodcast/simnet/rng.hpp"
#include "floodcast/simnet/scenario.hpp"
#include "floodcast/simnet/topology.hpp"
#include "floodcast/simnet/trace.hpp"

namespace floodcast::simnet {

struct ReadingPayload {
  int zone = 0;
  Reading reading;
};

struct ForecastPayload {
  int zone = 0;
  Reading reading;
  PredictionOutput output;
};

struct ResampleRequest {
  int zone = 0;
  double reading_t = 0.0;
};

/// Tells a sensor when to take its next scheduled sample.
struct SampleRequest {
  int zone = 0;
  std::int64_t at = 0;
};

struct Heartbeat {
  std::int64_t slot = 0;
};

struct TriggerNotice {
  int zone = 0;
  TriggerKind kind = TriggerKind::Event;
};

using Payload = std::variant<ReadingPayload, ForecastPayload, ResampleRequest,
                             SampleRequest, Heartbeat, TriggerNotice>;

inline std::string payload_name(const Payload &p) {
  static const char *names[] = {"reading",  "forecast",  "resample",
                                "sample",   "heartbeat", "trigger"};
  return names[p.index()];
}

class Fnv1a {
public:
  void add(std::uint64_t bits) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (bits >> (8 * i)) & 0xffu;
      hash_ *= 1099511628211ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(std::int64_t v) { add(static_cast<std::uint64_t>(v)); }
  void add(int v) { add(static_cast<std::int64_t>(v)); }
  void add(const Reading &r) {
    add(r.t);
    add(r.level);
    add(r.rainfall);
    add(r.discharge);
    for (const auto &x : r.extras)
      add(x.value);
  }
  std::uint64_t value() const { return hash_; }

private:
  std::uint64_t hash_ = 14695981039346656037ull;
};

inline std::uint64_t checksum(const Payload &payload) {
  Fnv1a h;
  h.add(static_cast<int>(payload.index()));
  std::visit(
      [&h](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ReadingPayload>) {
          h.add(p.zone);
          h.add(p.reading);
        } else if constexpr (std::is_same_v<T, ForecastPayload>) {
          h.add(p.zone);
          h.add(p.reading);
          h.add(p.output.predicted_level.value_or(-1.0));
          h.add(p.output.predicted_flood_in.value_or(-1.0));
          h.add(static_cast<int>(p.output.alarm));
        } else if constexpr (std::is_same_v<T, ResampleRequest>) {
          h.add(p.zone);
          h.add(p.reading_t);
        } else if constexpr (std::is_same_v<T, SampleRequest>) {
          h.add(p.zone);
          h.add(p.at);
        } else if constexpr (std::is_same_v<T, Heartbeat>) {
          h.add(p.slot);
        } else {
          h.add(p.zone);
          h.add(static_cast<int>(p.kind));
        }
      },
      payload);
  return h.value();
}

/// Replaces payload values with a seeded spike. Every branch changes at
/// least one checksummed value.
inline void corrupt_payload(Payload &payload, Rng &rng) {
  auto spike = [&rng]() { return 100.0 + 900.0 * rng.uniform(); };
  auto jump = [&rng]() {
    return 1 + static_cast<std::int64_t>(1000.0 * rng.uniform());
  };
  std::visit(
      [&](auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ReadingPayload> ||
                      std::is_same_v<T, ForecastPayload>) {
          p.reading.level += spike();
          p.reading.rainfall += spike();
          p.reading.discharge += spike();
        } else if constexpr (std::is_same_v<T, ResampleRequest>) {
          p.reading_t += spike();
        } else if constexpr (std::is_same_v<T, SampleRequest>) {
          p.at += jump();
        } else if constexpr (std::is_same_v<T, Heartbeat>) {
          p.slot += jump();
        } else {
          p.zone += static_cast<int>(jump());
        }
      },
      payload);
}

struct Message {
  std::uint64_t id = 0;
  int src = 0;
  int dst = 0;
  Payload payload;
  std::int64_t send_tick = 0;
  std::optional<std::int64_t> deliver_tick;
  bool corrupted = false;
  bool dropped = false;
  std::uint64_t checksum = 0;

  double send_time() const { return to_minutes(send_tick); }
  std::optional<double> deliver_time() const {
    if (!deliver_tick)
      return std::nullopt;
    return to_minutes(*deliver_tick);
  }
};

namespace detail {

enum class Action {
  SensorWake,
  Arrive,
  HeartbeatSend,
  SlotClose,
  ScriptedTrigger,
  Failure,
  WatchCheck,
  Resume
};

struct Pending {
  std::int64_t tick = 0;
  int node = 0;
  std::uint64_t seq = 0;
  Action action = Action::SensorWake;
  std::int64_t ref = 0;
};

struct Later {
  bool operator()(const Pending &a, const Pending &b) const {
    return std::tie(a.tick, a.node, a.seq) > std::tie(b.tick, b.node, b.seq);
  }
};

struct NodeRuntime {
  std::int64_t fail_tick = std::numeric_limits<std::int64_t>::max();
  std::int64_t awake_until = 0;
  std::int64_t tx_until = 0;
  std::int64_t accounted = 0;
  double energy = 0.0;
  std::uint64_t wake_generation = 0;
  int resample_budget = kMaxResamples;
};

class Simulator {
public:
  Simulator(const Network &network, const Scenario &scenario)
      : net_(network), scenario_(scenario), rng_(scenario.seed),
        horizon_(to_ticks(scenario.horizon)),
        period_(std::max<std::int64_t>(1, to_ticks(scenario.heartbeat_period))),
        monitor_(period_, scenario.missed_heartbeats,
                 computational_nodes(network)) {
    for (const auto &n : net_.nodes)
      runtime_[n.id];
    for (const auto &f : scenario_.failures) {
      auto &rt = runtime_.at(f.node);
      rt.fail_tick = std::min(rt.fail_tick, to_ticks(f.t));
    }
  }

  SimTrace run() {
    check_coverage();
    seed_schedule();
    while (!queue_.empty() && queue_.top().tick <= horizon_) {
      const Pending p = queue_.top();
      queue_.pop();
      now_ = p.tick;
      dispatch(p);
    }
    for (const auto &n : net_.nodes)
      account(n.id, horizon_);
    for (const auto &m : messages_)
      if (!m.deliver_tick && !m.dropped)
        ++trace_.messages.in_flight;
    return std::move(trace_);
  }

  const std::vector<Message> &messages() const { return messages_; }

private:
  Network net_;
  const Scenario &scenario_;
  Rng rng_;
  std::int64_t horizon_;
  std::int64_t period_;
  HeartbeatMonitor monitor_;
  std::int64_t now_ = 0;
  std::uint64_t queue_seq_ = 0;
  std::uint64_t trace_seq_ = 0;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::map<int, NodeRuntime> runtime_;
  std::vector<Message> messages_;
  std::map<std::pair<int, int>, double> last_step_t_; // (node, zone)
  SimTrace trace_;

  using Fields = std::vector<std::pair<std::string, std::string>>;

  void emit(int node, std::string kind, Fields fields = {}) {
    trace_.events.push_back(
        {now_, node, trace_seq_++, std::move(kind), std::move(fields)});
  }

  void schedule(std::int64_t tick, int node, Action action,
                std::int64_t ref = 0) {
    queue_.push({tick, node, queue_seq_++, action, ref});
  }

  bool down(int node) const { return now_ >= runtime_.at(node).fail_tick; }

  std::int64_t fallback_ticks() const {
    return to_ticks(scenario_.predictor.time_set.intervals.back());
  }

  void check_coverage() const {
    std::set<int> zones;
    for (const auto *group : {&net_.zone_sensors, &net_.zone_watchers})
      for (const auto &[zone, members] : *group)
        zones.insert(zone);
    for (int zone : zones) {
      auto it = scenario_.environment.find(zone);
      const std::string where = "environment zone " + std::to_string(zone);
      if (it == scenario_.environment.end() || it->second.empty())
        throw HorizonExceeded(where + " has no trace");
      const auto &env = it->second;
      if (env.start() > 0.0 || env.end() < scenario_.horizon)
        throw HorizonExceeded(
            where + " covers [" + format_number(env.start()) + ", " +
            format_number(env.end()) + "] min but the run needs [0, " +
            format_number(scenario_.horizon) + "]");
    }
  }

  void seed_schedule() {
    for (const auto &[zone, sensors] : net_.zone_sensors)
      for (int s : sensors)
        schedule(0, s, Action::SensorWake, 0);
    for (const auto &[zone, watchers] : net_.zone_watchers)
      for (int w : watchers)
        schedule(scenario_.event_watch.period_s, w, Action::WatchCheck);
    for (int c : computational_nodes(net_))
      schedule(0, c, Action::HeartbeatSend, 0);
    if (period_ <= horizon_)
      schedule(period_, net_.office, Action::SlotClose);
    for (std::size_t i = 0; i < scenario_.triggers.size(); ++i)
      schedule(to_ticks(scenario_.triggers[i].t), net_.office,
               Action::ScriptedTrigger, static_cast<std::int64_t>(i));
    for (const auto &f : scenario_.failures)
      schedule(to_ticks(f.t), f.node, Action::Failure);
  }

  void dispatch(const Pending &p) {
    switch (p.action) {
    case Action::SensorWake:
      if (!down(p.node) &&
          runtime_.at(p.node).wake_generation ==
              static_cast<std::uint64_t>(p.ref))
        sample(p.node, "schedule");
      break;
    case Action::Arrive:
      arrive(static_cast<std::size_t>(p.ref), p.node);
      break;
    case Action::HeartbeatSend:
      if (down(p.node))
        break;
      send(p.node, net_.office, Heartbeat{p.ref});
      if ((p.ref + 1) * period_ <= horizon_)
        schedule((p.ref + 1) * period_, p.node, Action::HeartbeatSend,
                 p.ref + 1);
      break;
    case Action::SlotClose:
      close_slot();
      break;
    case Action::ScriptedTrigger:
      scripted_trigger(scenario_.triggers[static_cast<std::size_t>(p.ref)]);
      break;
    case Action::Failure:
      emit(p.node, "node_down");
      break;
    case Action::WatchCheck:
      watch(p.node);
      break;
    case Action::Resume:
      request_samples(p.node, static_cast<int>(p.ref), now_);
      break;
    }
  }

  // Energy.

  PowerState state_at(const NodeRuntime &rt, std::int64_t tick) const {
    if (tick >= rt.fail_tick)
      return PowerState::Down;
    if (tick < rt.awake_until)
      return PowerState::Awake;
    if (tick < rt.tx_until)
      return PowerState::Transmitting;
    return PowerState::Idle;
  }

  void account(int node, std::int64_t until) {
    auto &rt = runtime_.at(node);
    const auto &info = net_.node(node);
    const double before = rt.energy;
    while (rt.accounted < until) {
      std::int64_t end = until;
      for (std::int64_t b : {rt.fail_tick, rt.awake_until, rt.tx_until})
        if (b > rt.accounted && b < end)
          end = b;
      rt.energy += power_step(info, state_at(rt, rt.accounted),
                              static_cast<double>(end - rt.accounted));
      rt.accounted = end;
    }
    auto &ledger = trace_.energy[node];
    if (ledger.empty() || rt.energy != before)
      ledger.push_back({until, rt.energy});
  }

  void busy_transmitting(int node) {
    account(node, now_);
    auto &rt = runtime_.at(node);
    rt.tx_until = std::max(rt.tx_until, now_) + scenario_.transmit_s;
  }

  // Messaging.

  void send(int src, int dst, Payload payload, Fields extra = {}) {
    Message m;
    m.id = messages_.size();
    m.src = src;
    m.dst = dst;
    m.payload = std::move(payload);
    m.send_tick = now_;
    m.checksum = checksum(m.payload);
    messages_.push_back(std::move(m));
    ++trace_.messages.sent;
    const auto &msg = messages_.back();
    Fields f{{"msg", format_number(msg.id)},
             {"src", format_number(src)},
             {"dst", format_number(dst)},
             {"payload", payload_name(msg.payload)}};
    f.insert(f.end(), extra.begin(), extra.end());
    emit(src, "send", std::move(f));
    hop(msg.id, src);
  }

  void drop(std::uint64_t id, int at, const std::string &reason) {
    auto &m = messages_[id];
    m.dropped = true;
    ++trace_.messages.dropped;
    emit(at, "drop",
         {{"msg", format_number(id)},
          {"payload", payload_name(m.payload)},
          {"reason", reason}});
  }

  void hop(std::uint64_t id, int at) {
    auto &m = messages_[id];
    const auto next = net_.route_next(at, m.dst);
    if (!next) {
      drop(id, at, "no_route");
      return;
    }
    busy_transmitting(at);
    const HopModel h = scenario_.channel.hop(at, *next);
    const bool lost = rng_.bernoulli(h.loss);
    const bool garbled = rng_.bernoulli(h.corruption);
    if (lost) {
      drop(id, at, "loss");
      return;
    }
    if (garbled) {
      corrupt_payload(m.payload, rng_);
      m.corrupted = true;
    }
    schedule(now_ + h.latency_s, *next, Action::Arrive,
             static_cast<std::int64_t>(id));
  }

  void arrive(std::size_t id, int at) {
    if (down(at)) {
      drop(id, at, "node_down");
      return;
    }
    auto &m = messages_[id];
    if (at != m.dst) {
      emit(at, "forward", {{"msg", format_number(m.id)}});
      hop(m.id, at);
      return;
    }
    m.deliver_tick = now_;
    ++trace_.messages.delivered;
    const bool bad = checksum(m.payload) != m.checksum;
    Fields f{{"msg", format_number(m.id)},
             {"src", format_number(m.src)},
             {"payload", payload_name(m.payload)},
             {"corrupted", bad ? "1" : "0"}};
    if (const auto *hb = std::get_if<Heartbeat>(&m.payload))
      f.emplace_back("slot", format_number(hb->slot));
    emit(at, "deliver", std::move(f));
    receive(at, m.id, bad);
  }

  void receive(int node, std::uint64_t id, bool bad) {
    // Handlers send messages, which may reallocate messages_.
    Message m = messages_[id];
    const NodeKind kind = net_.node(node).kind;
    if (bad) {
      if (auto *r = std::get_if<ReadingPayload>(&m.payload)) {
        r->reading.corrupted = true;
        messages_[id].payload = m.payload;
        emit(node, "corrupt_detected", {{"msg", format_number(id)}});
        send(node, m.src, ResampleRequest{r->zone, r->reading.t},
             {{"in_reply_to", format_number(id)}});
      } else {
        emit(node, "discard", {{"msg", format_number(id)}});
      }
      return;
    }
    if (kind == NodeKind::Sensor) {
      if (const auto *s = std::get_if<SampleRequest>(&m.payload))
        reschedule(node, s->at);
      else if (std::holds_alternative<ResampleRequest>(m.payload))
        resample(node);
    } else if (kind == NodeKind::Computational) {
      if (const auto *r = std::get_if<ReadingPayload>(&m.payload))
        compute(node, m, *r);
      else if (const auto *t = std::get_if<TriggerNotice>(&m.payload))
        triggered(node, *t);
    } else if (kind == NodeKind::Office) {
      if (const auto *fc = std::get_if<ForecastPayload>(&m.payload))
        office_forecast(m, *fc);
      else if (const auto *hb = std::get_if<Heartbeat>(&m.payload))
        monitor_.record(m.src, hb->slot, now_);
    }
  }

  // Sensors.

  void sample(int sensor, const std::string &reason) {
    const auto &info = net_.node(sensor);
    auto &rt = runtime_.at(sensor);
    const auto env = scenario_.environment.at(info.zone).at(to_minutes(now_));
    Reading r;
    r.t = to_minutes(now_);
    r.level = env.level;
    if (scenario_.sensor_noise > 0.0)
      r.level += scenario_.sensor_noise * rng_.normal();
    r.rainfall = env.rainfall;
    r.discharge = env.discharge;
    account(sensor, now_);
    rt.awake_until = std::max(rt.awake_until, now_ + scenario_.sample_s);
    if (reason != "resample")
      rt.resample_budget = kMaxResamples;
    emit(sensor, "sample",
         {{"zone", format_number(info.zone)},
          {"t_reading", format_number(r.t)},
          {"level", format_number(r.level)},
          {"reason", reason}});
    send(sensor, net_.zone_owner.at(info.zone),
         ReadingPayload{info.zone, r});
    ++rt.wake_generation;
    schedule(now_ + fallback_ticks(), sensor, Action::SensorWake,
             static_cast<std::int64_t>(rt.wake_generation));
  }

  void reschedule(int sensor, std::int64_t at) {
    auto &rt = runtime_.at(sensor);
    ++rt.wake_generation;
    schedule(std::max(at, now_), sensor, Action::SensorWake,
             static_cast<std::int64_t>(rt.wake_generation));
  }

  void resample(int sensor) {
    auto &rt = runtime_.at(sensor);
    if (rt.resample_budget <= 0) {
      emit(sensor, "resample_refused");
      return;
    }
    --rt.resample_budget;
    sample(sensor, "resample");
  }

  void watch(int watcher) {
    if (down(watcher))
      return;
    const auto &info = net_.node(watcher);
    const auto &env = scenario_.environment.at(info.zone);
    const double t = to_minutes(now_);
    const double before = to_minutes(now_ - scenario_.event_watch.period_s);
    if (env.covers(before)) {
      const double change = env.at(t).level - env.at(before).level;
      if (std::abs(change) >= scenario_.event_watch.delta) {
        emit(watcher, "abrupt_change",
             {{"zone", format_number(info.zone)},
              {"change", format_number(change)}});
        send(watcher, net_.zone_owner.at(info.zone),
             TriggerNotice{info.zone, TriggerKind::Event});
      }
    }
    if (now_ + scenario_.event_watch.period_s <= horizon_)
      schedule(now_ + scenario_.event_watch.period_s, watcher,
               Action::WatchCheck);
  }

  // Computational nodes.

  void request_samples(int node, int zone, std::int64_t at) {
    if (down(node))
      return;
    auto it = net_.zone_sensors.find(zone);
    if (it == net_.zone_sensors.end())
      return;
    for (int s : it->second)
      send(node, s, SampleRequest{zone, at});
  }

  void compute(int node, const Message &m, const ReadingPayload &r) {
    auto pred = net_.predictors.find({node, r.zone});
    if (pred == net_.predictors.end()) {
      emit(node, "ignored", {{"msg", format_number(m.id)},
                             {"reason", std::string("not_owner")}});
      return;
    }
    auto last = last_step_t_.find({node, r.zone});
    if (last != last_step_t_.end() && r.reading.t <= last->second) {
      emit(node, "stale", {{"msg", format_number(m.id)}});
      return;
    }
    PredictionOutput out;
    try {
      out = pred->second.step(r.reading);
    } catch (const Error &e) {
      emit(node, "step_error",
           {{"msg", format_number(m.id)}, {"what", quote(e.what())}});
      send(node, m.src, ResampleRequest{r.zone, r.reading.t},
           {{"in_reply_to", format_number(m.id)}});
      return;
    }
    last_step_t_[{node, r.zone}] = r.reading.t;
    trace_.predictions.push_back({node, r.zone, now_, m.id, r.reading, out});
    emit(node, "predict", prediction_fields(r.zone, m.id, out));
    send(node, net_.office, ForecastPayload{r.zone, r.reading, out});

    double next = r.reading.t + out.next_interval;
    if (out.threshold_crossed)
      next = std::min(next,
                      r.reading.t + scenario_.predictor.time_set.action_time);
    request_samples(node, r.zone, to_ticks(next));
  }

  void triggered(int node, const TriggerNotice &t) {
    emit(node, "trigger",
         {{"zone", format_number(t.zone)}, {"trigger", to_string(t.kind)}});
    request_samples(node, t.zone, now_);
  }

  // Office.

  void scripted_trigger(const ScriptedTrigger &t) {
    emit(net_.office, "script_trigger",
         {{"zone", format_number(t.zone)}, {"trigger", to_string(t.kind)}});
    send(net_.office, net_.zone_owner.at(t.zone),
         TriggerNotice{t.zone, t.kind});
  }

  void office_forecast(const Message &m, const ForecastPayload &fc) {
    const int office = net_.office;
    auto &pred = net_.office_predictors.at(fc.zone);
    auto last = last_step_t_.find({office, fc.zone});
    std::optional<PredictionOutput> mine;
    if (last == last_step_t_.end() || fc.reading.t > last->second) {
      try {
        mine = pred.step(fc.reading);
        last_step_t_[{office, fc.zone}] = fc.reading.t;
        trace_.predictions.push_back(
            {office, fc.zone, now_, m.id, fc.reading, *mine});
        emit(office, "predict", prediction_fields(fc.zone, m.id, *mine));
      } catch (const Error &e) {
        emit(office, "step_error",
             {{"msg", format_number(m.id)}, {"what", quote(e.what())}});
      }
    }
    if (mine && mine->predicted_level && fc.output.predicted_level)
      emit(office, "redundancy",
           {{"zone", format_number(fc.zone)},
            {"t_reading", format_number(fc.reading.t)},
            {"diff", format_number(std::abs(*mine->predicted_level -
                                            *fc.output.predicted_level))}});

    const PredictionOutput *raised = nullptr;
    int source = office;
    if (fc.output.alarm) {
      raised = &fc.output;
      source = m.src;
    } else if (mine && mine->alarm) {
      raised = &*mine;
    }
    if (raised) {
      const double flood_in = raised->predicted_flood_in.value_or(0.0);
      trace_.alarms.push_back({now_, fc.zone, source, fc.reading.t, flood_in});
      emit(office, "alarm",
           {{"zone", format_number(fc.zone)},
            {"source", format_number(source)},
            {"t_reading", format_number(fc.reading.t)},
            {"flood_in", format_number(flood_in)}});
    }
  }

  void close_slot() {
    const std::int64_t slot = now_ / period_ - 1;
    for (int failed : down(net_.office) ? std::vector<int>{}
                                        : monitor_.close_slot(slot)) {
      trace_.failures.push_back({failed, to_minutes(now_)});
      emit(net_.office, "failure_suspected",
           {{"suspect", format_number(failed)},
            {"missed", format_number(scenario_.missed_heartbeats)}});
      take_over(failed);
    }
    if (now_ + period_ <= horizon_)
      schedule(now_ + period_, net_.office, Action::SlotClose);
  }

  void take_over(int failed) {
    const auto peer = nearest_peer(net_, failed, monitor_.suspected());
    std::vector<int> zones;
    for (const auto &[zone, owner] : net_.zone_owner)
      if (owner == failed)
        zones.push_back(zone);
    for (int zone : zones) {
      if (!peer) {
        emit(net_.office, "takeover",
             {{"zone", format_number(zone)},
              {"from", format_number(failed)},
              {"to", std::string("none")}});
        continue;
      }
      net_.zone_owner[zone] = *peer;
      net_.predictors.try_emplace({*peer, zone},
                                  make_predictor(scenario_, zone));
      emit(net_.office, "takeover",
           {{"zone", format_number(zone)},
            {"from", format_number(failed)},
            {"to", format_number(*peer)}});
      if (now_ + 1 <= horizon_)
        schedule(now_ + 1, *peer, Action::Resume, zone);
    }
  }

  static std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s)
      out += c == '"' ? '\'' : c;
    return out + "\"";
  }

  static Fields prediction_fields(int zone, std::uint64_t msg,
                                  const PredictionOutput &out) {
    auto opt = [](const std::optional<double> &v) {
      return v ? format_number(*v) : std::string("none");
    };
    return {{"zone", format_number(zone)},
            {"msg", format_number(msg)},
            {"t_reading", format_number(out.t)},
            {"level", format_number(out.measured_level)},
            {"predicted", opt(out.predicted_level)},
            {"flood_in", opt(out.predicted_flood_in)},
            {"next_interval", format_number(out.next_interval)},
            {"alarm", out.alarm ? "1" : "0"}};
  }
};

} // namespace detail

struct SimulationResult {
  SimTrace trace;
  std::vector<Message> messages;
};

inline SimulationResult simulate(const Network &network,
                                 const Scenario &scenario) {
  detail::Simulator sim(network, scenario);
  SimulationResult out;
  out.trace = sim.run();
  out.messages = sim.messages();
  return out;
}

inline SimTrace run_simulation(const Network &network,
                               const Scenario &scenario) {
  return simulate(network, scenario).trace;
}

} // namespace floodcast::simnet
