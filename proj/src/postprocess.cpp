#include "lpcm/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpcm/assignment.hpp"
#include "lpcm/procrustes.hpp"

namespace lpcm {

std::size_t reference_draw(std::span<const DrawRecord> draws) {
  if (draws.empty()) throw std::invalid_argument("no draws");
  std::size_t best = 0;
  for (std::size_t t = 1; t < draws.size(); ++t)
    if (draws[t].loglik > draws[best].loglik) best = t;
  return best;
}

std::vector<Positions> align_positions(std::span<const DrawRecord> draws, std::size_t reference) {
  std::vector<Positions> out;
  out.reserve(draws.size());
  const auto& ref = draws[reference].z;
  for (const auto& d : draws) out.push_back(procrustes_align(d.z, ref));
  return out;
}

std::vector<int> match_labels(std::span<const int> alloc, int num_clusters, std::span<const int> ref,
                              int ref_clusters) {
  if (alloc.size() != ref.size()) throw std::invalid_argument("allocation lengths differ");
  const auto side = static_cast<std::size_t>(std::max(num_clusters, ref_clusters));
  std::vector<double> cost(side * side, 0.0);
  for (std::size_t i = 0; i < alloc.size(); ++i)
    cost[static_cast<std::size_t>(alloc[i]) * side + static_cast<std::size_t>(ref[i])] -= 1.0;
  auto col = solve_assignment(cost, side);
  col.resize(static_cast<std::size_t>(num_clusters));
  return col;
}

std::vector<int> modal_allocation(std::span<const std::vector<int>> allocs, int num_labels) {
  if (allocs.empty()) return {};
  const std::size_t n = allocs.front().size();
  std::vector<int> mode(n, 0);
  std::vector<std::size_t> tally(static_cast<std::size_t>(num_labels));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(tally.begin(), tally.end(), 0);
    for (const auto& a : allocs) ++tally[static_cast<std::size_t>(a[i])];
    mode[i] = static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
  }
  return mode;
}

Relabeling relabel(std::span<const std::vector<int>> allocs, std::span<const int> num_clusters,
                   std::vector<int> ref, int ref_clusters, int max_rounds) {
  if (allocs.size() != num_clusters.size()) throw std::invalid_argument("allocation and G lists differ");
  Relabeling out;
  out.alloc.resize(allocs.size());
  out.perm.resize(allocs.size());
  int labels = ref_clusters;
  for (int g : num_clusters) labels = std::max(labels, g);
  for (int round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (std::size_t t = 0; t < allocs.size(); ++t) {
      auto perm = match_labels(allocs[t], num_clusters[t], ref, ref_clusters);
      if (perm != out.perm[t]) changed = true;
      out.perm[t] = std::move(perm);
      auto& a = out.alloc[t];
      a.resize(allocs[t].size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = out.perm[t][static_cast<std::size_t>(allocs[t][i])];
    }
    out.rounds = round + 1;
    if (!changed && round > 0) break;
    ref = modal_allocation(out.alloc, labels);
    ref_clusters = labels;
  }
  out.reference = std::move(ref);
  return out;
}

std::map<int, double> model_probabilities(std::span<const DrawRecord> draws) {
  if (draws.empty()) throw std::invalid_argument("no draws");
  std::map<int, std::size_t> tally;
  for (const auto& d : draws) ++tally[d.num_clusters];
  std::map<int, double> probs;
  for (const auto& [g, c] : tally) probs[g] = static_cast<double>(c) / static_cast<double>(draws.size());
  return probs;
}

Postprocessed postprocess(std::span<const DrawRecord> draws, const MoveCounters& counters, double min_mass) {
  if (draws.empty()) throw std::invalid_argument("no draws to summarise");
  Postprocessed out;
  RunSummary& s = out.summary;
  const std::size_t n = draws.front().alloc.size();
  const std::size_t d = draws.front().z.dim();
  s.actors = n;
  s.draws = draws.size();
  s.counters = counters;
  s.model_probabilities = model_probabilities(draws);
  s.modal_clusters = std::max_element(s.model_probabilities.begin(), s.model_probabilities.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; })
                         ->first;
  s.reference = reference_draw(draws);
  s.reference_iter = draws[s.reference].iter;

  double mean = 0.0, sq = 0.0;
  for (const auto& r : draws) mean += r.beta;
  mean /= static_cast<double>(draws.size());
  for (const auto& r : draws) sq += (r.beta - mean) * (r.beta - mean);
  s.beta_mean = mean;
  s.beta_sd = draws.size() > 1 ? std::sqrt(sq / static_cast<double>(draws.size() - 1)) : 0.0;

  out.aligned = align_positions(draws, s.reference);
  out.relabeled.resize(draws.size());
  for (std::size_t t = 0; t < draws.size(); ++t) out.relabeled[t] = draws[t].alloc;

  for (const auto& [G, prob] : s.model_probabilities) {
    if (prob < min_mass) continue;
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < draws.size(); ++t)
      if (draws[t].num_clusters == G) idx.push_back(t);
    std::size_t ref = idx.front();
    for (std::size_t t : idx)
      if (draws[t].loglik > draws[ref].loglik) ref = t;

    std::vector<std::vector<int>> allocs;
    allocs.reserve(idx.size());
    for (std::size_t t : idx) allocs.push_back(draws[t].alloc);
    const std::vector<int> gs(idx.size(), G);
    auto rl = relabel(allocs, gs, draws[ref].alloc, G);

    GroupSummary gsum;
    gsum.num_clusters = G;
    gsum.probability = prob;
    gsum.draws = idx.size();
    gsum.reference = ref;
    gsum.relabel_rounds = rl.rounds;
    gsum.mean_z = Positions(n, d);
    gsum.membership.assign(n * static_cast<std::size_t>(G), 0.0);
    gsum.cluster_sizes.assign(static_cast<std::size_t>(G), 0.0);
    const double w = 1.0 / static_cast<double>(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t t = idx[k];
      out.relabeled[t] = rl.alloc[k];
      auto& mz = gsum.mean_z.data();
      const auto& az = out.aligned[t].data();
      for (std::size_t e = 0; e < mz.size(); ++e) mz[e] += w * az[e];
      for (std::size_t i = 0; i < n; ++i) {
        const auto g = static_cast<std::size_t>(rl.alloc[k][i]);
        gsum.membership[i * static_cast<std::size_t>(G) + g] += w;
        gsum.cluster_sizes[g] += w;
      }
    }
    gsum.modal_alloc = modal_allocation(rl.alloc, G);
    s.groups.push_back(std::move(gsum));
  }
  return out;
}

}  // namespace lpcm
