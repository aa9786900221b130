#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "archmap/evo.hpp"
#include "archmap/ioe.hpp"

namespace archmap {

struct HypervolumeSpec {
    ObjectiveVector reference_point;      // senses must match the front
    std::optional<double> normalizer;     // max-achievable value for percentage reporting

    void validate() const;
};

// Exact dominated hypervolume, dimension 2 (sorted sweep) or 3 (slicing).
// Maximize-sense positions are negated into minimize space first. Every front
// point must strictly dominate the reference point.
double hypervolume(const std::vector<ObjectiveVector> &front, const HypervolumeSpec &spec);

// Same measure, but points that fail to dominate the reference are dropped
// instead of rejected (internal traces can contain transient stragglers).
double hypervolume_clipped(const std::vector<ObjectiveVector> &front, const ObjectiveVector &reference);

struct CompositionEntry {
    std::string label; // "standalone:<cu>" or "distributed"
    int count = 0;
    double pct = 0.0;
};

std::string mapping_class(const std::vector<int> &assignments, const Platform &platform);
std::vector<CompositionEntry> pareto_composition(const std::vector<std::string> &classes);
std::vector<CompositionEntry> pareto_composition(const std::vector<IoeCandidate> &archive,
                                                 const Platform &platform);

struct EaVsRandomSeedResult {
    std::uint64_t seed = 0;
    std::vector<double> ea_trace;      // normalized HV after each evaluated population
    std::vector<double> random_trace;  // same budget chunks, uniform sampling
    double ea_final = 0.0;
    double random_final = 0.0;
};

struct EaVsRandomResult {
    std::vector<EaVsRandomSeedResult> per_seed;
    double ea_aggregate = 0.0;      // mean of final normalized HV over seeds
    double random_aggregate = 0.0;
    bool oracle_normalized = false; // true when the exact front was enumerable
    ObjectiveVector reference;      // (latency, energy) reference point used
};

// Equal-budget comparison of the mapping EA against uniform random sampling.
// Normalizer: oracle hypervolume when the instance fits `oracle_budget`,
// otherwise the hypervolume of the combined observed front per seed.
EaVsRandomResult ea_vs_random(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                              std::uint64_t budget, const std::vector<std::uint64_t> &seeds,
                              const IoeConfig &base_cfg, BigCount oracle_budget = BigCount{1} << 20);

} // namespace archmap
