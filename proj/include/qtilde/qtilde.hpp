#pragma once

// Variable-alphabet Q~ / nega-Q~ representations of [0,1] and the family of
// functions F with complicated local structure defined by the shift
// functional-equation system, in exact rational arithmetic.

#include "qtilde/digit_string.hpp"
#include "qtilde/function_f.hpp"
#include "qtilde/integral_prob.hpp"
#include "qtilde/matrix_spec.hpp"
#include "qtilde/rational.hpp"
#include "qtilde/representation.hpp"
#include "qtilde/series.hpp"
