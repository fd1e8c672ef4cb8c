#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "symlift/coordinates.hpp"
#include "symlift/group.hpp"
#include "symlift/model.hpp"

// Brute-force ground truth for small models.
namespace symlift::oracle {

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  double map_value = 0.0;
  std::vector<Configuration> argmax;
  std::vector<double> mean_params;  // laid out by GroundCoordinates
  double log_partition = 0.0;
};

/// Enumerates all 2^n configurations. Configurations within 1e-9 of the
/// best score count as maximizers.
ExactResult exact_enumerate(const Model& model, int limit = 20);

struct ConfigurationOrbit {
  std::vector<Configuration> members;
  std::vector<double> centroid;  // mean of Phi-o over the members
  double value = 0.0;            // <theta-o, centroid>
};

/// Orbits of {0,1}^n under x -> x^pi. Throws std::logic_error if the best
/// centroid value disagrees with the exact MAP value by more than 1e-9.
std::vector<ConfigurationOrbit> configuration_orbits(const Model& model,
                                                     const GeneratorSet& gens,
                                                     int limit = 16);

/// All (pi, gamma) satisfying the automorphism condition with gamma inside
/// tie classes. One gamma per pi (duplicate features are matched in order).
std::vector<PermutationPair> exhaustive_automorphisms(const Model& model,
                                                      int limit = 6);

/// Every element of the group generated by `gens`, by closure.
std::vector<PermutationPair> group_elements(const GeneratorSet& gens, int num_vars,
                                            int num_features,
                                            std::size_t limit = 100000);

struct CycleInequality {
  std::vector<int> vars;    // v_0 .. v_{k-1}; cycle closes back to v_0
  std::vector<int> edges;   // skeleton edge ids, edges[j] = {v_j, v_{j+1}}
  std::uint32_t f_mask = 0; // bit j set: edges[j] in F
  double lhs = 0.0;
};

/// All simple skeleton cycles of length 3..max_len with every odd F.
std::vector<CycleInequality> enumerate_cycle_constraints(
    const GroundCoordinates& coords, std::span<const double> tau, int max_len = 6);

}  // namespace symlift::oracle
