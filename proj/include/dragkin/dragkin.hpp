#pragma once

#include "dragkin/carriers.hpp"
#include "dragkin/core.hpp"
#include "dragkin/errors.hpp"
#include "dragkin/observables.hpp"
#include "dragkin/photon_kinetics.hpp"
#include "dragkin/pulse.hpp"
