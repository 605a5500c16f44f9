#pragma once

#include "blockspec/clustering.hpp"
#include "blockspec/evaluation.hpp"
#include "blockspec/io.hpp"
#include "blockspec/linalg.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/sbm.hpp"
#include "blockspec/scaled_power.hpp"
#include "blockspec/union_find.hpp"
#include "blockspec/verification.hpp"
