#pragma once

#include "gsqc/analysis.hpp"
#include "gsqc/basis.hpp"
#include "gsqc/circuit.hpp"
#include "gsqc/circuit_io.hpp"
#include "gsqc/common.hpp"
#include "gsqc/eigensolve.hpp"
#include "gsqc/gates.hpp"
#include "gsqc/generators.hpp"
#include "gsqc/ground_state.hpp"
#include "gsqc/hamiltonian.hpp"
#include "gsqc/reports.hpp"
#include "gsqc/resource.hpp"
#include "gsqc/teleport.hpp"
