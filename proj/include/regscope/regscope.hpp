#pragma once

// Umbrella header: the whole triage toolkit except the HTTP reputation
// client (include regscope/reputation_http.hpp separately when needed).

#include "regscope/caro.hpp"
#include "regscope/catalog.hpp"
#include "regscope/classes.hpp"
#include "regscope/datagen.hpp"
#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/ingest.hpp"
#include "regscope/ml/boosted.hpp"
#include "regscope/ml/common.hpp"
#include "regscope/ml/forest.hpp"
#include "regscope/ml/grid.hpp"
#include "regscope/ml/linear.hpp"
#include "regscope/ml/metrics.hpp"
#include "regscope/ml/mlp.hpp"
#include "regscope/ml/model.hpp"
#include "regscope/ml/split.hpp"
#include "regscope/ml/tree.hpp"
#include "regscope/paths.hpp"
#include "regscope/rng.hpp"
#include "regscope/triage.hpp"
#include "regscope/version.hpp"
