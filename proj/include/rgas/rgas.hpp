#pragma once

#include "rgas/errors.hpp"
#include "rgas/numkernel.hpp"
#include "rgas/quadrature.hpp"
#include "rgas/arith.hpp"
#include "rgas/zerofinder.hpp"
#include "rgas/superzeta.hpp"
#include "rgas/thermo.hpp"
