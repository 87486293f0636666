#pragma once

#include "strobo/basis.hpp"
#include "strobo/dynamics.hpp"
#include "strobo/errors.hpp"
#include "strobo/floquet.hpp"
#include "strobo/metrology.hpp"
#include "strobo/model.hpp"
#include "strobo/quasienergy.hpp"
#include "strobo/spectral.hpp"
#include "strobo/state.hpp"
#include "strobo/sweep.hpp"
