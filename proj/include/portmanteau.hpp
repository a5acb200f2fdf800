#pragma once

#include "portmanteau/builtins.hpp"
#include "portmanteau/error.hpp"
#include "portmanteau/function.hpp"
#include "portmanteau/interval_set.hpp"
#include "portmanteau/limits.hpp"
#include "portmanteau/measure.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/portmanteau.hpp"
#include "portmanteau/power_law.hpp"
#include "portmanteau/rational.hpp"
#include "portmanteau/report.hpp"
#include "portmanteau/scalar.hpp"
#include "portmanteau/scenario.hpp"
#include "portmanteau/set_expr.hpp"
#include "portmanteau/test_functions.hpp"
