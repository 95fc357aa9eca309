#pragma once

#include "pklap/ball.hpp"
#include "pklap/conditions.hpp"
#include "pklap/config.hpp"
#include "pklap/energy.hpp"
#include "pklap/errors.hpp"
#include "pklap/grid.hpp"
#include "pklap/harness.hpp"
#include "pklap/mountain_pass.hpp"
#include "pklap/newton.hpp"
#include "pklap/pipeline.hpp"
#include "pklap/problem.hpp"
#include "pklap/quadrature.hpp"
#include "pklap/report.hpp"
#include "pklap/tridiagonal.hpp"
