#pragma once

#include "factpat/bigint.hpp"
#include "factpat/census.hpp"
#include "factpat/counters.hpp"
#include "factpat/errors.hpp"
#include "factpat/estimate.hpp"
#include "factpat/factor.hpp"
#include "factpat/families.hpp"
#include "factpat/ff.hpp"
#include "factpat/field.hpp"
#include "factpat/patterns.hpp"
#include "factpat/poly.hpp"
#include "factpat/report.hpp"
#include "factpat/rng.hpp"
#include "factpat/sieve.hpp"
#include "factpat/symfun.hpp"
