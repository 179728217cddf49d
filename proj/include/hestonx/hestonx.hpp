#pragma once

#include "hestonx/approx.hpp"
#include "hestonx/bench.hpp"
#include "hestonx/blackscholes.hpp"
#include "hestonx/io.hpp"
#include "hestonx/model.hpp"
#include "hestonx/montecarlo.hpp"
#include "hestonx/quadrature.hpp"
#include "hestonx/reference.hpp"
#include "hestonx/terms.hpp"
