#pragma once

#include "symment/analytic.hpp"
#include "symment/density.hpp"
#include "symment/entanglement.hpp"
#include "symment/mps.hpp"
#include "symment/parallel.hpp"
#include "symment/protocols.hpp"
#include "symment/statevector.hpp"
#include "symment/sweep.hpp"
#include "symment/tensor_core.hpp"
