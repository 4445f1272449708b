#pragma once

#include "topokit/core/parallel.hpp"
#include "topokit/core/types.hpp"
#include "topokit/gradient/discrete_gradient.hpp"
#include "topokit/gradient/morse_smale.hpp"
#include "topokit/gradient/pl_compliance.hpp"
#include "topokit/gradient/vpath.hpp"
#include "topokit/io/field.hpp"
#include "topokit/io/off.hpp"
#include "topokit/scalar/critical_points.hpp"
#include "topokit/scalar/order_field.hpp"
#include "topokit/simplify/simplification.hpp"
#include "topokit/trees/contour_tree.hpp"
#include "topokit/trees/merge_tree.hpp"
#include "topokit/trees/persistence.hpp"
#include "topokit/triangulation/triangulation.hpp"
