// Umbrella header.
#pragma once

#include "icatopsis/ambiguity.hpp"
#include "icatopsis/bench.hpp"
#include "icatopsis/core.hpp"
#include "icatopsis/ica.hpp"
#include "icatopsis/io.hpp"
#include "icatopsis/metrics.hpp"
#include "icatopsis/pipelines.hpp"
#include "icatopsis/synth.hpp"
#include "icatopsis/topsis.hpp"
#include "icatopsis/topsis_m.hpp"
