#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "archmap/evo.hpp"
#include "archmap/hwmodel.hpp"

namespace archmap {

struct IoeConstraints {
    std::optional<double> latency_ms;        // T_TRG
    std::optional<double> energy_mj;         // E_TRG
    std::optional<double> power_mw;          // P_TRG over average power E/T
    std::optional<double> latency_increase;  // allowed ratio over the best standalone latency

    bool any() const { return latency_ms || energy_mj || power_mw || latency_increase; }
};

enum class DvfsMode { Fixed, Searched };
enum class ExhaustiveInit { Auto, On, Off };

struct IoeConfig {
    int population = 200;
    int generations = 10;        // evolution steps after the initial population
    double mutation_prob = 0.4;  // per assignment slot
    double crossover_prob = 0.8;
    double gamma1 = 1.0;         // energy exponent
    double gamma2 = 1.0;         // latency exponent
    double elite_fraction = 0.5;
    IoeConstraints constraints;
    DvfsMode dvfs_mode = DvfsMode::Fixed;
    std::string dvfs_setting;    // label; empty = platform default
    ExhaustiveInit exhaustive_init = ExhaustiveInit::Auto;
    std::size_t exhaustive_cap = std::size_t{1} << 16;
    int threads = 1;

    std::uint64_t budget() const {
        return static_cast<std::uint64_t>(population) * static_cast<std::uint64_t>(generations + 1);
    }
    void validate() const;
    static IoeConfig from_ini(const Ini &ini); // [ioe] section
};

struct StandaloneRef {
    int cu = -1;
    PerfEval eval;
};

// Per-CU standalone evaluations plus the componentwise best/worst, the
// normalization anchors for the scalar fitness.
struct StandaloneRefs {
    std::vector<StandaloneRef> per_cu; // only CUs able to host the whole plan
    double best_latency = 0.0;
    int best_latency_cu = -1;
    double best_energy = 0.0;
    int best_energy_cu = -1;
    double worst_latency = 0.0;
    double worst_energy = 0.0;
};

StandaloneRefs standalone_refs(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                               int dvfs_setting);

// Lower-is-better scalar (E/E_best)^g1 * (L/L_best)^g2; 1.0 means matching the
// best standalone option on both axes.
double ioe_fitness(const PerfEval &eval, const StandaloneRefs &refs, double gamma1, double gamma2);

struct IoeCandidate {
    std::vector<int> assignments;
    double latency = 0.0;
    double energy = 0.0;
    int transitions = 0;
};

struct IoeResult {
    MappingVector best_mapping;
    PerfEval best_eval;
    double best_fitness = 0.0;
    std::vector<IoeCandidate> pareto;  // mutually non-dominated in (latency, energy)
    StandaloneRefs normalization;
    bool feasible = true;              // false when constraints excluded every mapping
    bool exhaustive = false;
    std::uint64_t evaluations = 0;
    int dvfs_setting = 0;      // setting of best_eval (may come from a DVFS scan)
    int ea_dvfs_setting = 0;   // setting the mapping EA and its pareto ran at
    std::string dvfs_label;
    // archive (latency, energy) snapshot after each evaluated population
    std::vector<std::vector<std::pair<double, double>>> generation_fronts;
};

IoeResult search_mappings(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                          const IoeConfig &cfg, std::uint64_t seed);

struct OracleResult {
    std::vector<IoeCandidate> pareto;
    MappingVector best_mapping;
    PerfEval best_eval;
    double best_fitness = 0.0;
    bool feasible = true;  // false when constraints excluded every mapping
    BigCount enumerated = 0;
};

// Exhaustive enumeration of every capability-feasible mapping; refuses with
// the exact count when it exceeds `budget`.
OracleResult brute_force_oracle(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                                const IoeConfig &cfg, BigCount budget = BigCount{1} << 24);

struct DvfsSearchResult {
    int setting = 0;
    std::string label;
    PerfEval eval;
    double fitness = 0.0;
    int candidates_evaluated = 0;
};

// Eq.-14-style brute force over the whole DVFS space for a fixed mapping.
DvfsSearchResult search_dvfs(const WorkloadPlan &plan, const std::vector<int> &assignments,
                             const CostTable &table, const Platform &platform, double gamma1, double gamma2);

BigCount feasible_mapping_count(const PlanCostView &view);

} // namespace archmap
