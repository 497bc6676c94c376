#!/usr/bin/env python3
"""Regenerates demo.json, the seeded three-zone sensor-network scenario.

Zone 0 rises quadratically through the 25 m flood line at t = 613 min,
zones 1 and 2 stay calm, and zone 2 sees a dam-release step that its event
watcher should notice. The channel loses and corrupts a few messages, the
zone 1 computational node fails at t = 300 min, and the office issues one
query and one event trigger.
"""
import json
import math
import random

HORIZON = 720
CROSSING = 613.0
rng = random.Random(20120101)


def level_of(rain, dis):
    return 3.0 + 0.12 * rain + 0.014 * dis


def rising(t):
    x = t / CROSSING
    level = 5.0 + 20.0 * x * x
    rain = 5.0 + 40.0 * x * x + 3.0 * math.sin(t / 37.0)
    return level, rain


def calm(t, phase):
    level = 7.5 + 1.5 * math.sin(t / 90.0 + phase)
    rain = 10.0 + 4.0 * math.cos(t / 23.0 + phase)
    return level, rain


def release(t):
    level, rain = calm(t, 1.7)
    if 400 <= t <= 460:
        level += 1.5
    return level, rain


def samples(fn):
    out = []
    for t in range(0, HORIZON + 1, 2):
        level, rain = fn(t)
        dis = (level - 3.0 - 0.12 * rain) / 0.014
        out.append([t, round(level, 6), round(rain, 6), round(dis, 4)])
    return out


def history():
    rows = []
    for i in range(12):
        rain = rng.uniform(0.0, 30.0)
        dis = rng.uniform(100.0, 900.0)
        rows.append([-60 * (12 - i), round(level_of(rain, dis), 6),
                     round(rain, 6), round(dis, 4)])
    return rows


def node(i, kind, zone, links, **extra):
    return {"id": i, "kind": kind, "zone": zone, "links": links, **extra}


scenario = {
    "seed": 20120101,
    "horizon_min": HORIZON,
    "heartbeat_min": 10,
    "missed_heartbeats": 3,
    "sample_s": 2,
    "transmit_s": 1,
    "predictor": {"flood_line": 25.0, "threshold": 20.0,
                  "time_set": [5, 15, 30], "action_time": 5, "capacity": 10},
    "channel": {"loss": 0.01, "corruption": 0.02, "latency_s": 1,
                "links": [{"from": 30, "to": 20, "latency_s": 2}]},
    "event_watch": {"period_s": 60, "delta_m": 0.5},
    "power_defaults": {"sensing_mw": 15, "transmit_mw": 60,
                       "receive_mw": 2, "sleep_mw": 0.01},
    "nodes": [
        node(1, "sensor", 0, [11, 20]),
        node(2, "sensor", 1, [12, 20]),
        node(3, "sensor", 2, [13, 20]),
        node(4, "eventwatch", 2, [13], power={"sensing_mw": 5}),
        node(11, "computational", 0, [1, 20]),
        node(12, "computational", 1, [2, 20]),
        node(13, "computational", 2, [3, 4, 20]),
        node(20, "intermediate", 0, [1, 2, 3, 11, 12, 13, 30]),
        node(30, "office", 0, [20]),
    ],
    "environment": [
        {"zone": 0, "samples": samples(rising)},
        {"zone": 1, "samples": samples(lambda t: calm(t, 0.4))},
        {"zone": 2, "samples": samples(release)},
    ],
    "calibration": [{"zone": z, "readings": history()} for z in range(3)],
    "triggers": [{"t": 200, "kind": "query", "zone": 1},
                 {"t": 380, "kind": "event", "zone": 2}],
    "failures": [{"node": 12, "t": 300}],
}

with open("demo.json", "w") as f:
    json.dump(scenario, f, indent=1)
    f.write("\n")
