/**
 * @file
 * @brief Convenience header pulling in the whole library.
 */

#pragma once

#include "flowminer/baseline.hpp"
#include "flowminer/chaining.hpp"
#include "flowminer/core.hpp"
#include "flowminer/evaluation.hpp"
#include "flowminer/flow.hpp"
#include "flowminer/mining.hpp"
#include "flowminer/pipeline.hpp"
#include "flowminer/postprocess.hpp"
#include "flowminer/random.hpp"
#include "flowminer/report.hpp"
#include "flowminer/slicing.hpp"
#include "flowminer/trace_gen.hpp"
#include "flowminer/trace_io.hpp"
