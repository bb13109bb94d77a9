#pragma once

#include "octnag/baselines.hpp"
#include "octnag/dynamics.hpp"
#include "octnag/error.hpp"
#include "octnag/graph.hpp"
#include "octnag/integrator.hpp"
#include "octnag/objective.hpp"
#include "octnag/quadrature.hpp"
#include "octnag/regret.hpp"
#include "octnag/schedule.hpp"

namespace octnag {
inline constexpr const char* kVersion = "0.1.0";
}
