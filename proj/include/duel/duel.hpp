#pragma once

#include "duel/battlefield.hpp"
#include "duel/curve.hpp"
#include "duel/engine.hpp"
#include "duel/fluctuation.hpp"
#include "duel/game_spec.hpp"
#include "duel/renewal.hpp"
#include "duel/schedule.hpp"
#include "duel/simulator.hpp"
