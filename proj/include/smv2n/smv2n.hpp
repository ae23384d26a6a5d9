#pragma once

#include "smv2n/association.hpp"
#include "smv2n/channel.hpp"
#include "smv2n/config.hpp"
#include "smv2n/errors.hpp"
#include "smv2n/experiments.hpp"
#include "smv2n/io.hpp"
#include "smv2n/metrics.hpp"
#include "smv2n/rng.hpp"
#include "smv2n/stats.hpp"
#include "smv2n/topology.hpp"
