#pragma once

// Umbrella header for the library part (everything except the CLI commands).

#include "ndoppe/dataset.hpp"
#include "ndoppe/errors.hpp"
#include "ndoppe/estimate.hpp"
#include "ndoppe/model.hpp"
#include "ndoppe/risk.hpp"
#include "ndoppe/sample.hpp"
#include "ndoppe/sampler.hpp"
#include "ndoppe/specfun.hpp"
