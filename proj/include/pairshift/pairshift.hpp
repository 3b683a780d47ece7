#pragma once

#include "pairshift/dirac_amplitude.hpp"
#include "pairshift/kinematics.hpp"
#include "pairshift/numerics.hpp"
#include "pairshift/operator_amplitude.hpp"
#include "pairshift/partial_wave.hpp"
#include "pairshift/spin_algebra.hpp"
#include "pairshift/sweep.hpp"
#include "pairshift/vec3.hpp"
