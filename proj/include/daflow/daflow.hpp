#pragma once

#include "daflow/cli.hpp"
#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/flow.hpp"
#include "daflow/inverse.hpp"
#include "daflow/ode.hpp"
#include "daflow/poly.hpp"
#include "daflow/quadrature.hpp"
#include "daflow/rational.hpp"
#include "daflow/roots.hpp"
#include "daflow/series.hpp"
#include "daflow/special.hpp"
#include "daflow/valuation.hpp"
#include "daflow/version.hpp"
