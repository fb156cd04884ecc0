#pragma once

/**
 * @file qdisc.hpp
 * @brief Umbrella header for the qdisc library.
 */

#include "qdisc/calculus.hpp"
#include "qdisc/families.hpp"
#include "qdisc/io.hpp"
#include "qdisc/parallel.hpp"
#include "qdisc/params.hpp"
#include "qdisc/quadrature.hpp"
#include "qdisc/series.hpp"
#include "qdisc/spaces.hpp"
#include "qdisc/verify.hpp"
