#pragma once

#include "annulus/estimate.hpp"
#include "annulus/geometry.hpp"
#include "annulus/interval.hpp"
#include "annulus/lattice.hpp"
#include "annulus/random_model.hpp"
#include "annulus/rng.hpp"
#include "annulus/spectral.hpp"
#include "annulus/statistics.hpp"
