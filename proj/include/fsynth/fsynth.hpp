#pragma once

#include "fsynth/bounds.hpp"
#include "fsynth/chebyshev.hpp"
#include "fsynth/error.hpp"
#include "fsynth/exhibits.hpp"
#include "fsynth/extrapolate.hpp"
#include "fsynth/field_io.hpp"
#include "fsynth/fourier_grid.hpp"
#include "fsynth/harness.hpp"
#include "fsynth/plan.hpp"
#include "fsynth/prior.hpp"
#include "fsynth/quadrature.hpp"
#include "fsynth/tensor.hpp"
