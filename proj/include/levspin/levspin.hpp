#pragma once

// umbrella header

#include "levspin/cli.hpp"
#include "levspin/config.hpp"
#include "levspin/constants.hpp"
#include "levspin/frames.hpp"
#include "levspin/gate.hpp"
#include "levspin/hamiltonians.hpp"
#include "levspin/layout.hpp"
#include "levspin/magnetostatics.hpp"
#include "levspin/master_equation.hpp"
#include "levspin/observables.hpp"
#include "levspin/operators.hpp"
#include "levspin/params.hpp"
#include "levspin/phase_space.hpp"
#include "levspin/scenario_io.hpp"
#include "levspin/scenario_runner.hpp"
#include "levspin/scenario_types.hpp"
#include "levspin/scenarios_classical.hpp"
#include "levspin/scenarios_quantum.hpp"
#include "levspin/table.hpp"
