#pragma once

#include "spinsim/compiler.hpp"
#include "spinsim/dynamics.hpp"
#include "spinsim/eigenmap.hpp"
#include "spinsim/pauli.hpp"
#include "spinsim/pulse_sequence.hpp"
#include "spinsim/spin_system.hpp"
#include "spinsim/text.hpp"
