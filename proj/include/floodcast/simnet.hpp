#pragma once

#include "floodcast/simnet/heartbeat.hpp"
#include "floodcast/simnet/power.hpp"
#include "floodcast/simnet/rng.hpp"
#include "floodcast/simnet/scenario.hpp"
#include "floodcast/simnet/scenario_io.hpp"
#include "floodcast/simnet/simulation.hpp"
#include "floodcast/simnet/topology.hpp"
#include "floodcast/simnet/trace.hpp"
