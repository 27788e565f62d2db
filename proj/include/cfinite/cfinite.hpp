#pragma once

// Umbrella header for the cfinite library.

#include "cfinite/basis.hpp"
#include "cfinite/charpoly.hpp"
#include "cfinite/fasteval.hpp"
#include "cfinite/linalg.hpp"
#include "cfinite/model.hpp"
#include "cfinite/solver.hpp"
