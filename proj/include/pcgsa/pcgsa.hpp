#pragma once

#include "pcgsa/aquifer/model.hpp"
#include "pcgsa/basis.hpp"
#include "pcgsa/benchmarks.hpp"
#include "pcgsa/io.hpp"
#include "pcgsa/lar.hpp"
#include "pcgsa/multi_index.hpp"
#include "pcgsa/polynomials.hpp"
#include "pcgsa/probability.hpp"
#include "pcgsa/regression.hpp"
#include "pcgsa/sampling.hpp"
#include "pcgsa/sensitivity.hpp"
