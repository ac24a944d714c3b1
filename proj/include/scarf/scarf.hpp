#pragma once

#include "scarf/awi.hpp"
#include "scarf/case_studies.hpp"
#include "scarf/config.hpp"
#include "scarf/consumption.hpp"
#include "scarf/error.hpp"
#include "scarf/format.hpp"
#include "scarf/geo.hpp"
#include "scarf/ingest.hpp"
#include "scarf/report.hpp"
#include "scarf/spatial.hpp"
#include "scarf/stress_store.hpp"
#include "scarf/wsf.hpp"
