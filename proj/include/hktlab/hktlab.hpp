#pragma once

#include "hktlab/rational.hpp"
#include "hktlab/linalg.hpp"
#include "hktlab/tensor.hpp"
#include "hktlab/check.hpp"
#include "hktlab/invariant_geometry.hpp"
#include "hktlab/hyperhermitian.hpp"
#include "hktlab/obata.hpp"
#include "hktlab/curvature_analysis.hpp"
#include "hktlab/holonomy.hpp"
#include "hktlab/catalog.hpp"
#include "hktlab/analysis.hpp"
