#pragma once

#include "metricforge/analysis.hpp"
#include "metricforge/core.hpp"
#include "metricforge/cover.hpp"
#include "metricforge/distortion.hpp"
#include "metricforge/generate.hpp"
#include "metricforge/glue.hpp"
#include "metricforge/io.hpp"
#include "metricforge/report.hpp"
#include "metricforge/rng.hpp"
#include "metricforge/warp.hpp"
