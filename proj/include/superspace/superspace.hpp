#pragma once

#include "superspace/scalar.hpp"
#include "superspace/grassmann.hpp"
#include "superspace/superpoly.hpp"
#include "superspace/integrate.hpp"
#include "superspace/harmonics.hpp"
#include "superspace/hermite.hpp"
#include "superspace/basischange.hpp"
#include "superspace/spectral.hpp"
#include "superspace/schrodinger.hpp"
