#pragma once

#include "rxlink/constants.hpp"
#include "rxlink/design.hpp"
#include "rxlink/errors.hpp"
#include "rxlink/explorer.hpp"
#include "rxlink/integrator.hpp"
#include "rxlink/latch.hpp"
#include "rxlink/linkbudget.hpp"
#include "rxlink/lna.hpp"
#include "rxlink/numerics/monte_carlo.hpp"
#include "rxlink/numerics/ode.hpp"
#include "rxlink/numerics/quadrature.hpp"
#include "rxlink/numerics/random.hpp"
#include "rxlink/techmodel.hpp"
