#ifndef CAGAP_CAGAP_HPP
#define CAGAP_CAGAP_HPP

#include "cagap/analytic.hpp"
#include "cagap/costs.hpp"
#include "cagap/dp.hpp"
#include "cagap/dynamics.hpp"
#include "cagap/errors.hpp"
#include "cagap/experiments.hpp"
#include "cagap/gap.hpp"
#include "cagap/minimize.hpp"
#include "cagap/reduction.hpp"

#endif // CAGAP_CAGAP_HPP
