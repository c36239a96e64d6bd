#pragma once

#include "lqt/rational.hpp"
#include "lqt/polynomial.hpp"
#include "lqt/gcd.hpp"
#include "lqt/rational_function.hpp"
#include "lqt/parser.hpp"
#include "lqt/chart.hpp"
#include "lqt/series.hpp"
#include "lqt/program.hpp"
#include "lqt/shannon.hpp"
#include "lqt/pullback.hpp"
#include "lqt/config.hpp"
#include "lqt/examples.hpp"
