#pragma once

#include "gridrisk/catalog.hpp"
#include "gridrisk/catalog_io.hpp"
#include "gridrisk/dependency.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/mitigation.hpp"
#include "gridrisk/rational.hpp"
#include "gridrisk/report.hpp"
#include "gridrisk/risk_register.hpp"
#include "gridrisk/scoring.hpp"
