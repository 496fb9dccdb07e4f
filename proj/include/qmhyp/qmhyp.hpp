#pragma once

#include "qmhyp/bootstrap.hpp"
#include "qmhyp/cm_data.hpp"
#include "qmhyp/cm_evaluator.hpp"
#include "qmhyp/decomposer.hpp"
#include "qmhyp/lucas_zeta.hpp"
#include "qmhyp/modular_polynomials.hpp"
#include "qmhyp/numeric.hpp"
#include "qmhyp/verifier.hpp"
