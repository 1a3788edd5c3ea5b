#pragma once

#include "lips/bits.hpp"
#include "lips/dataset.hpp"
#include "lips/glm.hpp"
#include "lips/harness.hpp"
#include "lips/miner.hpp"
#include "lips/pattern.hpp"
#include "lips/ranking.hpp"
#include "lips/selector.hpp"
#include "lips/simulator.hpp"
