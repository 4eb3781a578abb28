#pragma once

// Umbrella header: analysis and simulation of frequency-dependent Kuramoto
// oscillators on bidirectional tree networks.

#include "kuratree/bounds.hpp"
#include "kuratree/config.hpp"
#include "kuratree/dynamics.hpp"
#include "kuratree/errors.hpp"
#include "kuratree/events.hpp"
#include "kuratree/graph.hpp"
#include "kuratree/io.hpp"
#include "kuratree/matrix.hpp"
#include "kuratree/reproduce.hpp"
#include "kuratree/spectral.hpp"
