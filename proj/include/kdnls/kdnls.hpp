#pragma once

#include "kdnls/error.hpp"
#include "kdnls/spectral/grid.hpp"
#include "kdnls/spectral/field.hpp"
#include "kdnls/spectral/multiplier.hpp"
#include "kdnls/spectral/norms.hpp"
#include "kdnls/model/model.hpp"
#include "kdnls/gauge/gauge.hpp"
#include "kdnls/integrator/integrator.hpp"
#include "kdnls/diagnostics/diagnostics.hpp"
#include "kdnls/lab/inequality_lab.hpp"
#include "kdnls/harness/harness.hpp"
