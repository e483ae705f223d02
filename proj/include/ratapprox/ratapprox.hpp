#ifndef RATAPPROX_RATAPPROX_HPP
#define RATAPPROX_RATAPPROX_HPP

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/basis.hpp"
#include "ratapprox/checks.hpp"
#include "ratapprox/config.hpp"
#include "ratapprox/error.hpp"
#include "ratapprox/experiments.hpp"
#include "ratapprox/geometry.hpp"
#include "ratapprox/hull.hpp"
#include "ratapprox/oracle.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/report.hpp"
#include "ratapprox/vip.hpp"

#endif  // RATAPPROX_RATAPPROX_HPP
