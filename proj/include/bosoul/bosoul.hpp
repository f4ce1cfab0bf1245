#pragma once

#include "bosoul/baselines.hpp"
#include "bosoul/basis_cache.hpp"
#include "bosoul/diffusion.hpp"
#include "bosoul/edge_list.hpp"
#include "bosoul/error.hpp"
#include "bosoul/generators.hpp"
#include "bosoul/graph.hpp"
#include "bosoul/localizer.hpp"
#include "bosoul/metrics.hpp"
#include "bosoul/rng.hpp"
#include "bosoul/sampler.hpp"
#include "bosoul/spectral.hpp"
#include "bosoul/surrogate.hpp"
