#pragma once

#include "risprop/channel.hpp"
#include "risprop/config.hpp"
#include "risprop/errors.hpp"
#include "risprop/experiments.hpp"
#include "risprop/geometry.hpp"
#include "risprop/interference_analytic.hpp"
#include "risprop/jet.hpp"
#include "risprop/mobility_sim.hpp"
#include "risprop/montecarlo.hpp"
#include "risprop/outage_epidemic.hpp"
#include "risprop/parallel.hpp"
#include "risprop/power_analytic.hpp"
#include "risprop/quadrature.hpp"
#include "risprop/rng.hpp"
#include "risprop/special_functions.hpp"
