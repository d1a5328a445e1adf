#pragma once

#include "sculpt/analysis.hpp"
#include "sculpt/bigraph.hpp"
#include "sculpt/circuit.hpp"
#include "sculpt/compiler.hpp"
#include "sculpt/fock.hpp"
#include "sculpt/qubit.hpp"
#include "sculpt/sculpting.hpp"
#include "sculpt/simulate.hpp"
