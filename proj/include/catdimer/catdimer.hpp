#ifndef CATDIMER_CATDIMER_HPP
#define CATDIMER_CATDIMER_HPP

#include "analytic.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "liouville.hpp"
#include "model.hpp"
#include "ratemodel.hpp"
#include "sweeps.hpp"
#include "tomography.hpp"

#endif // CATDIMER_CATDIMER_HPP
