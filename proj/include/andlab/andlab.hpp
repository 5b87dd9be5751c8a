#pragma once

// Umbrella header for the whole laboratory: lattice geometry, disorder
// sampling, spectral calculus, Monte Carlo estimators, inequality probes,
// and the experiment harness.

#include "andlab/accumulator.hpp"
#include "andlab/config.hpp"
#include "andlab/csv.hpp"
#include "andlab/cutoff.hpp"
#include "andlab/disorder.hpp"
#include "andlab/estimators.hpp"
#include "andlab/experiments.hpp"
#include "andlab/format.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/lattice.hpp"
#include "andlab/parallel.hpp"
#include "andlab/probes.hpp"
#include "andlab/quadrature.hpp"
#include "andlab/rng.hpp"
#include "andlab/spectral.hpp"
#include "andlab/version.hpp"
