#pragma once

// Umbrella header.

#include "argmle/asymptotics.hpp"
#include "argmle/common.hpp"
#include "argmle/estimation.hpp"
#include "argmle/innovations.hpp"
#include "argmle/io.hpp"
#include "argmle/laplace.hpp"
#include "argmle/montecarlo.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"
#include "argmle/state_space.hpp"
#include "argmle/stats.hpp"
#include "argmle/verify.hpp"
