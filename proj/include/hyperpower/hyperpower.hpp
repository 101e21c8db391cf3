#pragma once

#include "hyperpower/error.hpp"
#include "hyperpower/gf2.hpp"
#include "hyperpower/hypergraph.hpp"
#include "hyperpower/io.hpp"
#include "hyperpower/partition.hpp"
#include "hyperpower/power.hpp"
#include "hyperpower/solver.hpp"
#include "hyperpower/tensor.hpp"
