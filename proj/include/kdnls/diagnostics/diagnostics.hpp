#pragma once

#include "kdnls/diagnostics/corrections.hpp"
#include "kdnls/diagnostics/identities.hpp"
#include "kdnls/diagnostics/ledger.hpp"
#include "kdnls/diagnostics/reference.hpp"
#include "kdnls/diagnostics/time_series.hpp"
