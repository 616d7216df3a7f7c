#pragma once

#include "qbundle/confspace.hpp"
#include "qbundle/rng.hpp"

namespace qbundle {

// Closed loop in the quotient graph: random walk of the requested length,
// then the BFS shortest path back to base.
DiscretePath random_loop(const ConfigGraphPair& pair, int base, int walk_steps, Rng& rng);

// Loop that walks a random path gamma and returns along its reversal;
// trivially contractible.
DiscretePath backtrack_loop(const ConfigGraphPair& pair, int base, int walk_steps, Rng& rng);

// Contractible 4-loop around one lattice plaquette: a single particle visits
// the corners of a unit square while every other particle stays put. The
// square encloses no particle, so pair-angle windings vanish. Empty when the
// randomly chosen base offers no free plaquette (caller retries).
DiscretePath square_cell_loop(const ConfigGraphPair& pair, Rng& rng);

// Counterclockwise exchange of two particles around the 3x3 ring at the
// lowest corner of the box; any further particles are parked outside the
// ring. Returns the quotient loop and the ordered base representative whose
// first two particles are the exchanged pair, so loop_permutation(...) is the
// transposition (1 2). Needs dim >= 2 and the first two sides >= 3.
struct ExchangeLoop {
  DiscretePath loop;
  int base_rep = -1;
};
ExchangeLoop exchange_loop(const ConfigGraphPair& pair);

}
