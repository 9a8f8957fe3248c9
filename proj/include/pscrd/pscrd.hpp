#pragma once

#include "pscrd/errors.hpp"
#include "pscrd/rng.hpp"
#include "pscrd/protocol.hpp"
#include "pscrd/event_log.hpp"
#include "pscrd/metrics.hpp"
#include "pscrd/security.hpp"
#include "pscrd/scenario.hpp"
#include "pscrd/simulator.hpp"
#include "pscrd/config.hpp"
#include "pscrd/report.hpp"
#include "pscrd/svg_chart.hpp"
