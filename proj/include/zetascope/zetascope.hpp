#pragma once

#include "core.hpp"
#include "quadrature.hpp"
#include "primes.hpp"
#include "phases.hpp"
#include "linkage.hpp"
#include "omega_solver.hpp"
#include "zeta.hpp"
#include "selberg.hpp"
#include "window.hpp"
#include "curve.hpp"
#include "mollifier.hpp"
#include "scan.hpp"
#include "universality.hpp"
#include "io.hpp"
