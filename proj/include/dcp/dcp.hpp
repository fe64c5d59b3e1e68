#pragma once

#include "dcp/bands.hpp"
#include "dcp/bench.hpp"
#include "dcp/calibrate.hpp"
#include "dcp/config.hpp"
#include "dcp/draws.hpp"
#include "dcp/error.hpp"
#include "dcp/io.hpp"
#include "dcp/metrics.hpp"
#include "dcp/oracles.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/rng.hpp"
#include "dcp/rootfind.hpp"
#include "dcp/scores.hpp"
#include "dcp/synth.hpp"
