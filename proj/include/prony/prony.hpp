#pragma once

// Umbrella header: Prony / Pade / linear-prediction design of IIR digital
// filters from impulse-response or frequency-response samples, separate
// solution-error-optimal numerator design, and identification of
// sum-of-exponential signal parameters.

#include "prony/errors.hpp"
#include "prony/filter.hpp"
#include "prony/freq_design.hpp"
#include "prony/ident.hpp"
#include "prony/linalg.hpp"
#include "prony/time_design.hpp"
#include "prony/zero_design.hpp"
