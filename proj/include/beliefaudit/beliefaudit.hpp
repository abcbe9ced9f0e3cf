#pragma once

#include "beliefaudit/audit.hpp"
#include "beliefaudit/errors.hpp"
#include "beliefaudit/gamble.hpp"
#include "beliefaudit/lattice.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/price_model.hpp"
#include "beliefaudit/set_function.hpp"
#include "beliefaudit/tolerances.hpp"
#include "beliefaudit/valuation.hpp"
