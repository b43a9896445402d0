#pragma once

#include "surfcalc/calculus/constitutive.hpp"
#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/calculus/grid_field.hpp"
#include "surfcalc/calculus/material_derivative.hpp"
#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/calculus/reference.hpp"
#include "surfcalc/calculus/stencil.hpp"
#include "surfcalc/cli/catalog.hpp"
#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/cli/suites.hpp"
#include "surfcalc/errors.hpp"
#include "surfcalc/finite_difference.hpp"
#include "surfcalc/geometry/domain.hpp"
#include "surfcalc/geometry/flow_map.hpp"
#include "surfcalc/geometry/grid_geometry.hpp"
#include "surfcalc/geometry/invariants.hpp"
#include "surfcalc/geometry/metric.hpp"
#include "surfcalc/identities/identities.hpp"
#include "surfcalc/identities/report.hpp"
#include "surfcalc/quadrature/quadrature.hpp"
#include "surfcalc/solver/barotropic.hpp"
#include "surfcalc/solver/diffusion.hpp"
#include "surfcalc/solver/discretization.hpp"
#include "surfcalc/solver/manufactured.hpp"
#include "surfcalc/solver/state.hpp"
#include "surfcalc/summation.hpp"
#include "surfcalc/types.hpp"
#include "surfcalc/variational/variational.hpp"
