#pragma once

#include "special_functions.hpp"
#include "sphere.hpp"
#include "filters.hpp"
#include "zonal_kernel.hpp"
#include "cubature.hpp"
#include "zonal_expansion.hpp"
#include "operators.hpp"
#include "sobolev.hpp"
#include "experiments.hpp"
