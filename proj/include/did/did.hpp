/// Umbrella header for the deception-in-depth toolkit.

#pragma once

#include "did/attacker_sim.hpp"
#include "did/campaign.hpp"
#include "did/decision_tree.hpp"
#include "did/errors.hpp"
#include "did/fingerprint.hpp"
#include "did/layer_chain.hpp"
#include "did/planner.hpp"
#include "did/report.hpp"
#include "did/rng.hpp"
#include "did/scenario.hpp"
#include "did/types.hpp"
#include "did/version.hpp"
