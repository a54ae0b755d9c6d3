#pragma once

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"
#include "dephase/special_functions.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/mode_dynamics.hpp"
#include "dephase/transport.hpp"
#include "dephase/closed_forms.hpp"
#include "dephase/info_thermo.hpp"
#include "dephase/fluctuation.hpp"
#include "dephase/scenario/config.hpp"
#include "dephase/scenario/runner.hpp"
#include "dephase/scenario/acceptance.hpp"
