#pragma once

#include "hho/random.hpp"
#include "hho/geometry.hpp"
#include "hho/mobility.hpp"
#include "hho/radio.hpp"
#include "hho/specfun.hpp"
#include "hho/analytics.hpp"
#include "hho/simengine.hpp"
#include "hho/config.hpp"
#include "hho/experiment.hpp"
