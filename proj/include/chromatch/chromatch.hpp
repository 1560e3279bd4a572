#pragma once

// Library for nearly color-balanced perfect matchings in edge-colored
// complete graphs: uniform matching sampling, swap-based local search, and
// convex-combination rounding, plus exhaustive small-order oracles.

#include "chromatch/exact_lp.hpp"
#include "chromatch/experiments.hpp"
#include "chromatch/graph.hpp"
#include "chromatch/instances.hpp"
#include "chromatch/matching.hpp"
#include "chromatch/oracle.hpp"
#include "chromatch/parallel.hpp"
#include "chromatch/rational.hpp"
#include "chromatch/rng.hpp"
#include "chromatch/rounding.hpp"
#include "chromatch/rpm.hpp"
#include "chromatch/swap_search.hpp"
