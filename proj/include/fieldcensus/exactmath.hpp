#pragma once

#include "fieldcensus/exactmath/algebra.hpp"
#include "fieldcensus/exactmath/bigint.hpp"
#include "fieldcensus/exactmath/factor_integer.hpp"
#include "fieldcensus/exactmath/factor_zz.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/exactmath/mpreal.hpp"
#include "fieldcensus/exactmath/primes.hpp"
#include "fieldcensus/exactmath/resultant.hpp"
#include "fieldcensus/exactmath/roots.hpp"
#include "fieldcensus/exactmath/sturm.hpp"
#include "fieldcensus/exactmath/zp_poly.hpp"
