// lpfsieve.hpp
// Umbrella header.

#pragma once

#include "lpfsieve/densities.hpp"
#include "lpfsieve/error_lab.hpp"
#include "lpfsieve/errors.hpp"
#include "lpfsieve/legendre_moebius.hpp"
#include "lpfsieve/prime_table.hpp"
#include "lpfsieve/rational.hpp"
#include "lpfsieve/report.hpp"
#include "lpfsieve/sieve_core.hpp"
#include "lpfsieve/verify.hpp"
