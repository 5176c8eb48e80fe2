#pragma once

#include "mrq/circuit.hpp"
#include "mrq/evolution.hpp"
#include "mrq/platform.hpp"
#include "mrq/relaxation.hpp"
#include "mrq/run_config.hpp"
#include "mrq/serialize.hpp"
#include "mrq/spin.hpp"
#include "mrq/tepa.hpp"
