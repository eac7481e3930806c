#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "lpcm/positions.hpp"
#include "lpcm/sampler.hpp"

namespace lpcm {

/// Index of the draw with the largest log-likelihood (earliest on ties).
std::size_t reference_draw(std::span<const DrawRecord> draws);

/// Every draw's positions Procrustes-aligned to the reference draw.
std::vector<Positions> align_positions(std::span<const DrawRecord> draws, std::size_t reference);

/// Permutation perm[g] = new label of draw label g (g < num_clusters), minimising
/// -|{i : k_i = g, ref_i = perm[g]}| over a square matrix of side max(G, G_ref).
std::vector<int> match_labels(std::span<const int> alloc, int num_clusters, std::span<const int> ref,
                              int ref_clusters);

struct Relabeling {
  std::vector<std::vector<int>> alloc;  // relabeled allocations
  std::vector<std::vector<int>> perm;   // per-draw permutation applied
  std::vector<int> reference;           // final reference allocation
  int rounds = 0;
};

/// Iterated matching: relabel every draw against ref, replace ref with the per-actor
/// modal relabeled label, repeat until no permutation changes or max_rounds.
Relabeling relabel(std::span<const std::vector<int>> allocs, std::span<const int> num_clusters,
                   std::vector<int> ref, int ref_clusters, int max_rounds = 10);

/// Per-actor most frequent label (smallest label on ties).
std::vector<int> modal_allocation(std::span<const std::vector<int>> allocs, int num_labels);

/// Empirical frequency of each G.
std::map<int, double> model_probabilities(std::span<const DrawRecord> draws);

struct GroupSummary {
  int num_clusters = 0;
  double probability = 0.0;
  std::size_t draws = 0;
  std::size_t reference = 0;              // index into the full draw list
  Positions mean_z;                       // aligned posterior mean positions
  std::vector<double> membership;         // n x G row-major
  std::vector<int> modal_alloc;
  std::vector<double> cluster_sizes;      // posterior mean size of each relabeled cluster
  int relabel_rounds = 0;
};

struct RunSummary {
  std::size_t actors = 0;
  std::size_t draws = 0;
  std::map<int, double> model_probabilities;
  int modal_clusters = 0;
  std::size_t reference = 0;
  long reference_iter = 0;
  double beta_mean = 0.0;
  double beta_sd = 0.0;
  std::vector<GroupSummary> groups;  // every G with at least min_mass posterior mass
  MoveCounters counters;
};

struct Postprocessed {
  RunSummary summary;
  std::vector<Positions> aligned;            // per draw
  std::vector<std::vector<int>> relabeled;   // per draw (draws in groups below min_mass keep their labels)
};

/// Alignment to the overall highest-likelihood draw, then per-G relabeling against
/// each group's highest-likelihood draw, and per-G summaries.
Postprocessed postprocess(std::span<const DrawRecord> draws, const MoveCounters& counters, double min_mass = 0.01);

}  // namespace lpcm
