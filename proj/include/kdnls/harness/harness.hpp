#pragma once

#include "kdnls/harness/acceptance.hpp"
#include "kdnls/harness/config.hpp"
#include "kdnls/harness/experiments.hpp"
#include "kdnls/harness/initial_data.hpp"
#include "kdnls/harness/io.hpp"
#include "kdnls/harness/report.hpp"
