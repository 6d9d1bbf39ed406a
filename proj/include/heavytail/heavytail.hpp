#pragma once

#include "heavytail/distribution.hpp"
#include "heavytail/error.hpp"
#include "heavytail/estimate.hpp"
#include "heavytail/input.hpp"
#include "heavytail/io.hpp"
#include "heavytail/lambert_w.hpp"
#include "heavytail/likelihood.hpp"
#include "heavytail/normality.hpp"
#include "heavytail/optim.hpp"
#include "heavytail/random.hpp"
#include "heavytail/sample_stats.hpp"
#include "heavytail/simulate.hpp"
#include "heavytail/transform.hpp"
