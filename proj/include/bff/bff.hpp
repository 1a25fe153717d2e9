#pragma once

#include "bff/calibration.hpp"
#include "bff/curve.hpp"
#include "bff/dep.hpp"
#include "bff/dist.hpp"
#include "bff/engine.hpp"
#include "bff/io.hpp"
#include "bff/meta.hpp"
#include "bff/priors.hpp"
#include "bff/sim.hpp"
