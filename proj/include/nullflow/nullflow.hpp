#pragma once

#include "nullflow/diffalg.hpp"
#include "nullflow/expr.hpp"
#include "nullflow/hierarchy.hpp"
#include "nullflow/nullcurve.hpp"
#include "nullflow/numsim.hpp"
#include "nullflow/operators.hpp"
#include "nullflow/report.hpp"
