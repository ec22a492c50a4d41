#pragma once

// Seeded random model generators for property tests.

#include <cstddef>
#include <random>
#include <string>

#include "compocheck/model.hpp"

namespace gen {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);
bool chance(Rng& rng, double p);

/// Interfaces (some of them groups) and classes with generalizations,
/// realizations and ports; at most `max_classifiers` classifiers, acyclic.
compocheck::Model hierarchy(Rng& rng, int max_classifiers = 20);

/// Class `Hub` whose provided port `p` has 2-5 links to part ports, over an
/// interface universe of `universe` interfaces. Occasionally one link is
/// typed with a deleg association.
compocheck::Model port_fan(Rng& rng, int universe = 10);

/// A model that passes every rule: recursive composites that split their
/// provided interfaces among parts, with required ports wired to siblings
/// or delegated outward. Root is set.
compocheck::Model well_formed(Rng& rng);

/// Root C0 with provided port p:I relaying through `length - 1` nested
/// composites to a leaf that realizes I.
compocheck::Model relay_chain(int length);

compocheck::Model drop_connector(const compocheck::Model& model, const std::string& owner, std::size_t index);

}  // namespace gen
