#pragma once

#include "bjj/continuum.hpp"
#include "bjj/control.hpp"
#include "bjj/dicke_state.hpp"
#include "bjj/esta.hpp"
#include "bjj/ground_state.hpp"
#include "bjj/hamiltonian.hpp"
#include "bjj/hermite.hpp"
#include "bjj/io.hpp"
#include "bjj/metrics.hpp"
#include "bjj/polynomial.hpp"
#include "bjj/propagator.hpp"
#include "bjj/quadrature.hpp"
#include "bjj/robustness.hpp"
#include "bjj/scenario.hpp"
#include "bjj/system_params.hpp"
