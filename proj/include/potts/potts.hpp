#pragma once

#include "potts/constants.hpp"
#include "potts/error.hpp"
#include "potts/mc/clusters.hpp"
#include "potts/mc/connectivity.hpp"
#include "potts/mc/estimate.hpp"
#include "potts/mc/lattice.hpp"
#include "potts/mc/rng.hpp"
#include "potts/mc/samplers.hpp"
#include "potts/quadrature.hpp"
#include "potts/radii.hpp"
#include "potts/reference_tables.hpp"
#include "potts/specfun.hpp"
#include "potts/verify.hpp"
