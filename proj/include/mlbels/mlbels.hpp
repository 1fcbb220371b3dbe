#pragma once

// Streaming multi-label classification with weighted binary-relevance
// ensembles over a broad-learning feature mapping, selective drift
// adaptation, and explicit missing-label handling.

#include "mlbels/matrix.hpp"
#include "mlbels/rng.hpp"
#include "mlbels/ridge.hpp"
#include "mlbels/mapping.hpp"
#include "mlbels/labels.hpp"
#include "mlbels/metrics.hpp"
#include "mlbels/weighting.hpp"
#include "mlbels/ensemble.hpp"
#include "mlbels/model.hpp"
#include "mlbels/parallel.hpp"
#include "mlbels/data_io.hpp"
#include "mlbels/synthetic.hpp"
#include "mlbels/evaluate.hpp"
