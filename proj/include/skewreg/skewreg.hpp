#pragma once

// Umbrella header for the skewreg toolkit: skewed-label regression treated
// as an imbalanced-learning problem. Bin the label space, classify bins into
// many/medium/few-shot regions, train under cost-sensitive re-weighting
// (Focal, LDS, or both), and evaluate region-stratified error.

#include "skewreg/binning.hpp"
#include "skewreg/csv.hpp"
#include "skewreg/dataset.hpp"
#include "skewreg/experiment.hpp"
#include "skewreg/metrics.hpp"
#include "skewreg/mlp.hpp"
#include "skewreg/model_io.hpp"
#include "skewreg/report.hpp"
#include "skewreg/reweight.hpp"
#include "skewreg/rng.hpp"
#include "skewreg/synthetic.hpp"
#include "skewreg/trainer.hpp"
